// SPDX-License-Identifier: Apache-2.0
#include "nearfield/sv_analysis.hpp"

#include <algorithm>
#include <future>
#include <set>

#include <Eigen/QR>

namespace nearfield {

template <typename Scalar>
BasicChannelMatrix<Scalar> build_channel(const BasicElementLayout<Scalar> &layout, const BasicApertureConfig<Scalar> &config,
                                         Eigen::Index n_range_samples)
{
  using std::log;
  using std::sqrt;
  if (n_range_samples < 8)
    throw std::invalid_argument("channel sampling needs at least 8 range samples");
  if (layout.size() == 0)
    throw std::invalid_argument("channel needs at least one element");
  const auto limits = nf_limits(config);
  if (!(limits.span_wl > Scalar(0)))
    throw DomainError("channel sampling requires a positive near-field span (D > alpha*beta*lambda/2)");

  BasicChannelMatrix<Scalar> channel;
  channel.layout = layout;
  channel.range_samples_wl = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::LinSpaced(n_range_samples, log(limits.d_min_wl),
                                                                                 log(limits.d_max_wl))
                                 .array()
                                 .exp();
  channel.range_samples_wl(0) = limits.d_min_wl;
  channel.range_samples_wl(n_range_samples - 1) = limits.d_max_wl;

  const auto &p = layout.positions;
  const Scalar two_pi = Scalar(2) * Scalar(EIGEN_PI);
  channel.entries.resize(n_range_samples, p.rows());
  for (Eigen::Index n = 0; n < p.rows(); ++n) {
    const Scalar transverse_sq = p(n, 0) * p(n, 0) + p(n, 1) * p(n, 1);
    for (Eigen::Index m = 0; m < n_range_samples; ++m) {
      const Scalar dz = channel.range_samples_wl(m) - p(n, 2);
      const Scalar r = sqrt(transverse_sq + dz * dz);
      // Only the fractional wavelength matters for the phase.
      channel.entries(m, n) = std::polar(Scalar(1) / r, -two_pi * (r - std::floor(r)));
    }
  }
  return channel;
}

template ChannelMatrix build_channel(const ElementLayout &, const ApertureConfig &, Eigen::Index);

Eigen::Index default_range_samples(ArrayGeometry geometry, double aperture_wl)
{
  const auto expected = static_cast<Eigen::Index>(std::ceil(sv_count_power_law_raw(geometry, aperture_wl)));
  return std::max<Eigen::Index>(256, 16 * expected);
}

SvCountSample sv_count_at(ArrayGeometry geometry, double aperture_wl, const SweepOptions &options)
{
  const ApertureConfig config(geometry, aperture_wl, options.beta, options.mode);
  const auto layout = generate_layout(geometry, aperture_wl, options.spacing_wl);
  const auto spectrum_at = [&](Eigen::Index samples) {
    return sv_spectrum(build_channel(layout, config, samples), options.threshold_db);
  };

  Eigen::Index samples = options.range_samples > 0 ? options.range_samples : default_range_samples(geometry, aperture_wl);
  auto spectrum = spectrum_at(samples);
  if (options.refine_until_stable) {
    while (2 * samples <= options.max_range_samples) {
      auto denser = spectrum_at(2 * samples);
      if (denser.significant_count == spectrum.significant_count)
        break;
      samples *= 2;
      spectrum = std::move(denser);
    }
  }
  return {aperture_wl, spectrum.significant_count, samples, layout.size(), spectrum.significant_power()};
}

std::vector<SvCountSample> sweep_sv_counts(ArrayGeometry geometry, std::span<const double> apertures_wl,
                                           const SweepOptions &options)
{
  if (apertures_wl.empty())
    throw std::invalid_argument("aperture sweep is empty");
  if (std::adjacent_find(apertures_wl.begin(), apertures_wl.end(), std::greater_equal<>()) != apertures_wl.end())
    throw std::invalid_argument("aperture sweep must be strictly ascending");

  std::vector<std::future<SvCountSample>> tasks;
  tasks.reserve(apertures_wl.size());
  for (const double d : apertures_wl)
    tasks.push_back(std::async(std::launch::async, [=, &options] { return sv_count_at(geometry, d, options); }));

  std::vector<SvCountSample> out;
  out.reserve(tasks.size());
  for (auto &t : tasks)
    out.push_back(t.get());
  return out;
}

PowerLawFit fit_power_law(std::span<const std::pair<double, double>> samples)
{
  if (samples.size() < 4)
    throw std::invalid_argument("power-law fit needs at least 4 samples");
  std::set<double> distinct;
  for (const auto &[aperture, count] : samples) {
    if (!(aperture > 0.0))
      throw std::invalid_argument("power-law fit needs positive apertures");
    if (!(count >= 1.0))
      throw std::invalid_argument("power-law fit needs counts >= 1");
    distinct.insert(aperture);
  }
  if (distinct.size() != samples.size())
    throw std::invalid_argument("power-law fit needs distinct apertures");

  const auto n = static_cast<Eigen::Index>(samples.size());
  Eigen::MatrixX2d design(n, 2);
  Eigen::VectorXd target(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    design(i, 0) = 1.0;
    design(i, 1) = std::log(samples[i].first);
    target(i) = std::log(samples[i].second);
  }
  const Eigen::Vector2d coeffs = design.colPivHouseholderQr().solve(target);
  const Eigen::VectorXd residuals = design * coeffs - target;

  PowerLawFit fit;
  fit.kappa = std::exp(coeffs(0));
  fit.gamma = coeffs(1);
  fit.residual = std::sqrt(residuals.squaredNorm() / static_cast<double>(n));
  fit.sample_points.assign(samples.begin(), samples.end());
  return fit;
}

} // namespace nearfield
