// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "nearfield/geometry.hpp"
#include "nearfield/metrics.hpp"

namespace nearfield {

/// Phase-only focused array factor along the broadside axis.
///
/// Weights are the conjugate of the exact spherical-wave phase to the focal
/// point (or the plane-wave limit for a far-field focus), so the normalized
/// factor is 1 at the focus. Path loss is not included.
template <typename Scalar> class BasicFocusedArrayFactor
{
public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  // std::nullopt focuses at infinity.
  BasicFocusedArrayFactor(BasicElementLayout<Scalar> layout, std::optional<Scalar> focus_wl);

  Scalar operator()(Scalar eval_distance_wl) const;

  const BasicElementLayout<Scalar> &layout() const noexcept { return layout_; }
  std::optional<Scalar> focus_wl() const noexcept { return focus_; }
  bool far_field() const noexcept { return !focus_.has_value(); }

private:
  BasicElementLayout<Scalar> layout_;
  std::optional<Scalar> focus_;
  Vector transverse_sq_; // x^2 + y^2
  Vector focus_delay_;   // r_n(focus) - focus, in wavelengths
};

using FocusedArrayFactor = BasicFocusedArrayFactor<double>;

template <typename Scalar>
Scalar array_factor(const BasicElementLayout<Scalar> &layout, std::optional<Scalar> focus_wl, Scalar eval_distance_wl);

/// -3 dB crossings of the exact array factor around `focus_wl`, found by
/// geometric bracketing (factor 2) and bisection to 1e-6 relative distance.
/// Throws DomainError when the beam has no right crossing before 100 d_FA
/// (focus at or beyond the near-field limit) or no left one above 0.1 focus.
template <typename Scalar>
BasicBeamEdges<Scalar> find_3db_edges_numeric(const BasicElementLayout<Scalar> &layout, Scalar focus_wl);

template <typename Scalar> struct BasicBeamspotPlan
{
  BasicApertureConfig<Scalar> config;
  std::vector<BasicBeamEdges<Scalar>> beams;
  Scalar covered_start_wl;
  Scalar covered_end_wl;

  std::size_t count() const noexcept { return beams.size(); }
};

using BeamspotPlan = BasicBeamspotPlan<double>;

/// Greedy packing of 3 dB beamspots into the near-field region.
///
/// The first beam is focused at beta*D. Each next focus places its left
/// -3 dB edge on the previous right edge; beams are accepted while the focus
/// does not exceed d_FA/alpha. Edges are the closed-form ones.
template <typename Scalar> BasicBeamspotPlan<Scalar> fit_beamspots(const BasicApertureConfig<Scalar> &config);

template <typename Scalar> struct BasicAfCurves
{
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  Vector distance_wl;
  Matrix values;                  // rows = distances; one column per beam, last column far field
  std::vector<std::string> names; // column names for `values`
};

using AfCurves = BasicAfCurves<double>;

/// Array factor of every planned beam plus a far-field-focused beam, sampled
/// on a log grid over [d_min/2, 4 d_max].
template <typename Scalar>
BasicAfCurves<Scalar> emit_af_curves(const BasicApertureConfig<Scalar> &config, const BasicBeamspotPlan<Scalar> &plan,
                                     Eigen::Index samples, Scalar spacing_wl = Scalar(kMaxElementSpacing));

extern template class BasicFocusedArrayFactor<double>;
extern template class BasicFocusedArrayFactor<long double>;
extern template double array_factor(const ElementLayout &, std::optional<double>, double);
extern template BeamEdges find_3db_edges_numeric(const ElementLayout &, double);
extern template BeamspotPlan fit_beamspots(const ApertureConfig &);
extern template BasicBeamspotPlan<long double> fit_beamspots(const BasicApertureConfig<long double> &);
extern template AfCurves emit_af_curves(const ApertureConfig &, const BeamspotPlan &, Eigen::Index, double);

} // namespace nearfield
