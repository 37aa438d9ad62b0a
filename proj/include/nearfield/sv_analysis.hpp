// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include "nearfield/geometry.hpp"
#include "nearfield/metrics.hpp"

namespace nearfield {

inline constexpr double kDefaultThresholdDb = -20.0;

/// Line-of-sight channel from every element to points on the broadside axis.
/// Row m is the range sample, column n the element;
/// H(m, n) = exp(-j 2 pi r_mn) / r_mn with r_mn in wavelengths.
template <typename Scalar> struct BasicChannelMatrix
{
  using Matrix = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Matrix entries;
  Vector range_samples_wl;
  BasicElementLayout<Scalar> layout;
};

using ChannelMatrix = BasicChannelMatrix<double>;

/// Channel sampled at `n_range_samples` log-spaced points on [beta D, d_FA/alpha].
template <typename Scalar>
BasicChannelMatrix<Scalar> build_channel(const BasicElementLayout<Scalar> &layout, const BasicApertureConfig<Scalar> &config,
                                         Eigen::Index n_range_samples);

template <typename Scalar> struct BasicSvSpectrum
{
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Vector normalized_powers_db; // sigma_n^2 / sum sigma^2, descending, dB
  Scalar threshold_db = Scalar(kDefaultThresholdDb);
  Eigen::Index significant_count = 0;

  Vector linear_powers() const
  {
    return normalized_powers_db.unaryExpr([](Scalar p) { return std::pow(Scalar(10), p / Scalar(10)); });
  }

  // Fraction of the channel power held by the significant singular values.
  Scalar significant_power() const { return linear_powers().head(significant_count).sum(); }
};

using SvSpectrum = BasicSvSpectrum<double>;

/// Normalized singular-value power spectrum of any real or complex matrix
/// expression. Singular values are taken from the eigenvalues of the smaller
/// Gram matrix; singular vectors are never formed.
template <typename Derived>
BasicSvSpectrum<typename Derived::RealScalar> sv_spectrum(const Eigen::MatrixBase<Derived> &matrix,
                                                          typename Derived::RealScalar threshold_db =
                                                              typename Derived::RealScalar(kDefaultThresholdDb))
{
  using Real = typename Derived::RealScalar;
  using Scalar = typename Derived::Scalar;
  using Gram = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  if (matrix.rows() == 0 || matrix.cols() == 0)
    throw std::invalid_argument("singular-value spectrum of an empty matrix");
  if (!(threshold_db < Real(0)))
    throw std::invalid_argument("significance threshold must be negative (dB)");

  const auto evaluated = matrix.eval();
  const Gram gram = evaluated.rows() <= evaluated.cols() ? Gram(evaluated * evaluated.adjoint())
                                                         : Gram(evaluated.adjoint() * evaluated);
  Eigen::SelfAdjointEigenSolver<Gram> solver(gram, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigenvalue decomposition of the Gram matrix failed");

  // Ascending from the solver; rounding can leave tiny negatives.
  Eigen::Matrix<Real, Eigen::Dynamic, 1> power = solver.eigenvalues().reverse().cwiseMax(Real(0));
  const Real total = power.sum();
  if (!(total > Real(0)))
    throw std::invalid_argument("singular-value spectrum of an all-zero matrix");
  power /= total;

  BasicSvSpectrum<Real> spectrum;
  spectrum.threshold_db = threshold_db;
  spectrum.normalized_powers_db = power.unaryExpr([](Real p) {
    return p > Real(0) ? Real(10) * std::log10(p) : -std::numeric_limits<Real>::infinity();
  });
  spectrum.significant_count = (spectrum.normalized_powers_db.array() >= threshold_db).count();
  return spectrum;
}

template <typename Scalar>
BasicSvSpectrum<Scalar> sv_spectrum(const BasicChannelMatrix<Scalar> &channel,
                                    Scalar threshold_db = Scalar(kDefaultThresholdDb))
{
  return sv_spectrum(channel.entries, threshold_db);
}

struct SweepOptions
{
  double beta = kMinimumBeta;
  Mode mode = Mode::SimoMiso;
  double threshold_db = kDefaultThresholdDb;
  double spacing_wl = kMaxElementSpacing;
  Eigen::Index range_samples = 0; // 0: 16x the power-law estimate, at least 256
  bool refine_until_stable = true;
  Eigen::Index max_range_samples = 8192;
};

/// Default sampling density for an aperture: 16x the expected count, >= 256.
Eigen::Index default_range_samples(ArrayGeometry geometry, double aperture_wl);

struct SvCountSample
{
  double aperture_wl;
  Eigen::Index significant_count;
  Eigen::Index range_samples; // density the count was taken at
  Eigen::Index elements;
  double significant_power;
};

/// Significant singular values for one aperture. With `refine_until_stable`
/// the range sampling is doubled until two consecutive densities agree.
SvCountSample sv_count_at(ArrayGeometry geometry, double aperture_wl, const SweepOptions &options = {});

/// Counts for an ascending list of apertures; apertures run concurrently.
std::vector<SvCountSample> sweep_sv_counts(ArrayGeometry geometry, std::span<const double> apertures_wl,
                                           const SweepOptions &options = {});

struct PowerLawFit
{
  double kappa;
  double gamma;
  double residual; // RMS of the log-log residuals
  std::vector<std::pair<double, double>> sample_points;

  double predict(double aperture_wl) const { return kappa * std::pow(aperture_wl, gamma); }
  // Growth is sublinear but increasing, as for every geometry tabulated.
  bool plausible() const { return kappa > 0.0 && gamma > 0.0 && gamma < 1.0; }
};

/// Least-squares fit of log(count) = log(kappa) + gamma log(D).
PowerLawFit fit_power_law(std::span<const std::pair<double, double>> samples);

extern template ChannelMatrix build_channel(const ElementLayout &, const ApertureConfig &, Eigen::Index);

} // namespace nearfield
