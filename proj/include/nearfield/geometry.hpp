// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Core>

#include "nearfield/error.hpp"

namespace nearfield {

// All lengths in this library are expressed in wavelengths.

inline constexpr double kSpeedOfLight = 299'792'458.0; // m/s
inline constexpr double kMinimumBeta = 1.2;
inline constexpr double kMaxElementSpacing = 0.5;

enum class ArrayGeometry { ULA, UCA, URA, UPCA };

inline constexpr std::array<ArrayGeometry, 4> kAllGeometries{ArrayGeometry::ULA, ArrayGeometry::UCA,
                                                             ArrayGeometry::URA, ArrayGeometry::UPCA};

// SIMO/MISO uses the one-way array factor; MIMO the combined transmit/receive
// factor of a monostatic sensing aperture. Only alpha changes between them.
enum class Mode { SimoMiso, Mimo };

inline constexpr std::array<Mode, 2> kAllModes{Mode::SimoMiso, Mode::Mimo};

struct GeometryConstants
{
  double alpha_simo_miso;
  double alpha_mimo;
  double kappa;
  double gamma;

  constexpr double alpha(Mode mode) const noexcept { return mode == Mode::Mimo ? alpha_mimo : alpha_simo_miso; }
};

constexpr GeometryConstants constants_for(ArrayGeometry geometry) noexcept
{
  switch (geometry) {
  case ArrayGeometry::ULA: return {6.952, 4.969, 0.434, 0.676};
  case ArrayGeometry::UCA: return {5.737, 4.148, 0.503, 0.650};
  case ArrayGeometry::URA: return {9.937, 7.068, 0.413, 0.662};
  case ArrayGeometry::UPCA: return {7.087, 5.103, 0.383, 0.707};
  }
  return {6.952, 4.969, 0.434, 0.676};
}

constexpr double alpha_for(ArrayGeometry geometry, Mode mode) noexcept { return constants_for(geometry).alpha(mode); }

std::string_view to_string(ArrayGeometry geometry) noexcept;
std::string_view to_string(Mode mode) noexcept;
// Case-insensitive; accepts "ula", "URA", ... and "simo-miso"/"simo_miso"/"mimo".
std::optional<ArrayGeometry> parse_geometry(std::string_view text);
std::optional<Mode> parse_mode(std::string_view text);

/// Geometry, aperture and operating point shared by every metric.
///
/// The checked constructor enforces beta >= 1.2, the usual lower limit of the
/// radiative near field. `unchecked` admits any beta > 0 for research sweeps.
template <typename Scalar> class BasicApertureConfig
{
public:
  BasicApertureConfig(ArrayGeometry geometry, Scalar aperture_wl, Scalar beta = Scalar(kMinimumBeta),
                      Mode mode = Mode::SimoMiso)
      : BasicApertureConfig(geometry, aperture_wl, beta, mode, Scalar(kMinimumBeta))
  {
  }

  static BasicApertureConfig unchecked(ArrayGeometry geometry, Scalar aperture_wl, Scalar beta,
                                       Mode mode = Mode::SimoMiso)
  {
    return BasicApertureConfig(geometry, aperture_wl, beta, mode, Scalar(0));
  }

  ArrayGeometry geometry() const noexcept { return geometry_; }
  Scalar aperture_wl() const noexcept { return aperture_wl_; }
  Scalar beta() const noexcept { return beta_; }
  Mode mode() const noexcept { return mode_; }
  Scalar alpha() const noexcept { return Scalar(alpha_for(geometry_, mode_)); }

  // Same geometry, beta and mode at another aperture. Beta was validated at
  // construction so the copy bypasses the beta check.
  BasicApertureConfig with_aperture(Scalar aperture_wl) const
  {
    return BasicApertureConfig(geometry_, aperture_wl, beta_, mode_, Scalar(0));
  }

  bool operator==(const BasicApertureConfig &) const = default;

private:
  BasicApertureConfig(ArrayGeometry geometry, Scalar aperture_wl, Scalar beta, Mode mode, Scalar beta_floor)
      : geometry_(geometry), aperture_wl_(aperture_wl), beta_(beta), mode_(mode)
  {
    if (!(aperture_wl > Scalar(0)) || !std::isfinite(static_cast<double>(aperture_wl)))
      throw std::invalid_argument("aperture must be a positive finite number of wavelengths");
    if (!(beta > Scalar(0)) || !std::isfinite(static_cast<double>(beta)))
      throw std::invalid_argument("beta must be positive");
    if (beta < beta_floor)
      throw std::invalid_argument("beta must be >= 1.2 (use ApertureConfig::unchecked for smaller values)");
  }

  ArrayGeometry geometry_;
  Scalar aperture_wl_;
  Scalar beta_;
  Mode mode_;
};

using ApertureConfig = BasicApertureConfig<double>;

/// Element positions, one row per isotropic element, in wavelengths.
///
/// The centroid sits at the origin and the observation axis is +z. ULA lies
/// on x; URA and UPCA fill the xy-plane. The UCA ring lies in the xz-plane so
/// that the observation axis is in the plane of the ring: a ring normal to
/// the axis is equidistant from every on-axis point and cannot focus in range.
template <typename Scalar> struct BasicElementLayout
{
  using Positions = Eigen::Matrix<Scalar, Eigen::Dynamic, 3>;

  Positions positions;
  ArrayGeometry geometry = ArrayGeometry::ULA;
  Scalar aperture_wl = Scalar(0);

  Eigen::Index size() const noexcept { return positions.rows(); }
};

using ElementLayout = BasicElementLayout<double>;

template <typename Scalar>
BasicElementLayout<Scalar> generate_layout(ArrayGeometry geometry, Scalar aperture_wl,
                                           Scalar spacing_wl = Scalar(kMaxElementSpacing))
{
  using std::ceil;
  using std::floor;
  using std::sqrt;
  if (!(aperture_wl > Scalar(0)))
    throw std::invalid_argument("aperture must be positive");
  if (!(spacing_wl > Scalar(0)))
    throw std::invalid_argument("element spacing must be positive");
  if (spacing_wl > Scalar(kMaxElementSpacing))
    throw std::invalid_argument("element spacing above 0.5 wavelengths under-samples the aperture");

  const Scalar eps(1e-9);
  BasicElementLayout<Scalar> layout;
  layout.geometry = geometry;
  layout.aperture_wl = aperture_wl;
  auto &p = layout.positions;

  switch (geometry) {
  case ArrayGeometry::ULA: {
    const auto n = static_cast<Eigen::Index>(ceil(aperture_wl / spacing_wl - eps)) + 1;
    p.setZero(n, 3);
    p.col(0) = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::LinSpaced(n, -aperture_wl / 2, aperture_wl / 2);
    break;
  }
  case ArrayGeometry::UCA: {
    const Scalar pi = Scalar(EIGEN_PI);
    const auto n = std::max<Eigen::Index>(3, static_cast<Eigen::Index>(ceil(pi * aperture_wl / spacing_wl - eps)));
    const Scalar radius = aperture_wl / 2;
    p.setZero(n, 3);
    for (Eigen::Index i = 0; i < n; ++i) {
      const Scalar theta = Scalar(2) * pi * Scalar(i) / Scalar(n);
      p(i, 0) = radius * std::cos(theta);
      p(i, 2) = radius * std::sin(theta);
    }
    break;
  }
  case ArrayGeometry::URA: {
    // Aperture is the diagonal of the square.
    const Scalar side = aperture_wl / sqrt(Scalar(2));
    const auto m = static_cast<Eigen::Index>(ceil(side / spacing_wl - eps)) + 1;
    const auto axis = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::LinSpaced(m, -side / 2, side / 2).eval();
    p.setZero(m * m, 3);
    for (Eigen::Index iy = 0; iy < m; ++iy)
      for (Eigen::Index ix = 0; ix < m; ++ix) {
        p(iy * m + ix, 0) = axis(ix);
        p(iy * m + ix, 1) = axis(iy);
      }
    break;
  }
  case ArrayGeometry::UPCA: {
    const Scalar radius = aperture_wl / 2;
    const auto half = static_cast<Eigen::Index>(floor(radius / spacing_wl + eps));
    const Scalar limit = radius * radius * (Scalar(1) + eps);
    Eigen::Index count = 0;
    for (Eigen::Index iy = -half; iy <= half; ++iy)
      for (Eigen::Index ix = -half; ix <= half; ++ix)
        if (Scalar(ix * ix + iy * iy) * spacing_wl * spacing_wl <= limit)
          ++count;
    p.setZero(count, 3);
    Eigen::Index row = 0;
    for (Eigen::Index iy = -half; iy <= half; ++iy)
      for (Eigen::Index ix = -half; ix <= half; ++ix)
        if (Scalar(ix * ix + iy * iy) * spacing_wl * spacing_wl <= limit) {
          p(row, 0) = Scalar(ix) * spacing_wl;
          p(row, 1) = Scalar(iy) * spacing_wl;
          ++row;
        }
    break;
  }
  }
  return layout;
}

/// Aperture in wavelengths from a physical size and carrier frequency.
double to_wavelengths(double aperture_m, double carrier_hz);

} // namespace nearfield
