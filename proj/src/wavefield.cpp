// SPDX-License-Identifier: Apache-2.0
#include "nearfield/wavefield.hpp"

#include <cmath>
#include <limits>

namespace nearfield {

namespace {

// r - p for the distance r from (x, y, z) to the axis point (0, 0, p), written
// so that it keeps full precision when p is large compared with the aperture.
template <typename Scalar> Scalar path_excess(Scalar transverse_sq, Scalar z, Scalar p)
{
  using std::sqrt;
  const Scalar dz = p - z;
  const Scalar r = sqrt(transverse_sq + dz * dz);
  return (transverse_sq + z * z - Scalar(2) * p * z) / (r + p);
}

template <typename Scalar> Scalar half_power() { return Scalar(1) / std::sqrt(Scalar(2)); }

} // namespace

template <typename Scalar>
BasicFocusedArrayFactor<Scalar>::BasicFocusedArrayFactor(BasicElementLayout<Scalar> layout, std::optional<Scalar> focus_wl)
    : layout_(std::move(layout)), focus_(focus_wl)
{
  if (layout_.size() == 0)
    throw std::invalid_argument("array factor needs at least one element");
  if (focus_ && !(*focus_ > Scalar(0)))
    throw std::invalid_argument("focal distance must be positive");
  const auto &p = layout_.positions;
  transverse_sq_ = p.col(0).array().square() + p.col(1).array().square();
  focus_delay_.resize(p.rows());
  for (Eigen::Index n = 0; n < p.rows(); ++n)
    focus_delay_(n) = focus_ ? path_excess(transverse_sq_(n), p(n, 2), *focus_) : -p(n, 2);
}

template <typename Scalar> Scalar BasicFocusedArrayFactor<Scalar>::operator()(Scalar eval_distance_wl) const
{
  using std::cos;
  using std::sin;
  if (!(eval_distance_wl > Scalar(0)))
    throw std::invalid_argument("array factor evaluation distance must be positive");
  const Scalar two_pi = Scalar(2) * Scalar(EIGEN_PI);
  const auto &p = layout_.positions;
  Scalar re(0), im(0);
  for (Eigen::Index n = 0; n < p.rows(); ++n) {
    const Scalar phase = two_pi * (focus_delay_(n) - path_excess(transverse_sq_(n), p(n, 2), eval_distance_wl));
    re += cos(phase);
    im += sin(phase);
  }
  return std::hypot(re, im) / Scalar(p.rows());
}

template <typename Scalar>
Scalar array_factor(const BasicElementLayout<Scalar> &layout, std::optional<Scalar> focus_wl, Scalar eval_distance_wl)
{
  return BasicFocusedArrayFactor<Scalar>(layout, focus_wl)(eval_distance_wl);
}

template <typename Scalar>
BasicBeamEdges<Scalar> find_3db_edges_numeric(const BasicElementLayout<Scalar> &layout, Scalar focus_wl)
{
  if (!(focus_wl > Scalar(0)))
    throw std::invalid_argument("focal distance must be positive");
  const BasicFocusedArrayFactor<Scalar> af(layout, focus_wl);
  const Scalar threshold = half_power<Scalar>();
  const auto above = [&](Scalar d) { return af(d) > threshold; };
  const Scalar rel_tol(1e-6);

  // inside: AF above threshold; outside: AF at or below it.
  const auto bisect = [&](Scalar inside, Scalar outside) {
    while (std::abs(outside - inside) > rel_tol * std::min(inside, outside)) {
      const Scalar mid = (inside + outside) / Scalar(2);
      (above(mid) ? inside : outside) = mid;
    }
    return (inside + outside) / Scalar(2);
  };

  const Scalar left_limit = Scalar(0.1) * focus_wl;
  Scalar inside = focus_wl;
  Scalar outside = focus_wl / Scalar(2);
  while (above(outside)) {
    if (outside <= left_limit)
      throw DomainError("no left -3 dB crossing above 0.1x the focal distance");
    inside = outside;
    outside = std::max(outside / Scalar(2), left_limit);
  }
  const Scalar left = bisect(inside, outside);

  const Scalar right_limit = Scalar(100) * fraunhofer_distance(layout.aperture_wl);
  inside = focus_wl;
  outside = Scalar(2) * focus_wl;
  while (above(outside)) {
    if (outside >= right_limit)
      throw DomainError("beam diverged: no right -3 dB crossing; focus is at or beyond the near-field limit");
    inside = outside;
    outside = std::min(Scalar(2) * outside, right_limit);
  }
  const Scalar right = bisect(inside, outside);
  return {left, focus_wl, right};
}

template <typename Scalar> BasicBeamspotPlan<Scalar> fit_beamspots(const BasicApertureConfig<Scalar> &config)
{
  const Scalar alpha = config.alpha();
  const Scalar beta = config.beta();
  if (config.aperture_wl() < alpha * beta)
    throw DomainError("no finite beam fits in the near-field: requires D >= alpha*beta*lambda");

  const auto limits = nf_limits(config);
  const Scalar fa = limits.fraunhofer_wl;
  const Scalar inf = std::numeric_limits<Scalar>::infinity();

  BasicBeamspotPlan<Scalar> plan{config, {}, Scalar(0), Scalar(0)};
  Scalar focus = limits.d_min_wl;
  while (focus <= limits.d_max_wl) {
    const Scalar left = fa * focus / (fa + alpha * focus);
    const Scalar right_denominator = fa - alpha * focus;
    const Scalar right = right_denominator > Scalar(0) ? fa * focus / right_denominator : inf;
    plan.beams.push_back({left, focus, right});
    if (right == inf)
      break;
    // Next focus f solves left(f) = right.
    const Scalar next_denominator = fa - alpha * right;
    if (next_denominator <= Scalar(0))
      break;
    focus = right * fa / next_denominator;
  }
  plan.covered_start_wl = plan.beams.front().left_wl;
  plan.covered_end_wl = plan.beams.back().right_wl;
  return plan;
}

template <typename Scalar>
BasicAfCurves<Scalar> emit_af_curves(const BasicApertureConfig<Scalar> &config, const BasicBeamspotPlan<Scalar> &plan,
                                     Eigen::Index samples, Scalar spacing_wl)
{
  using std::log;
  if (samples < 2)
    throw std::invalid_argument("array factor curves need at least 2 samples");
  const auto limits = nf_limits(config);
  const auto layout = generate_layout(config.geometry(), config.aperture_wl(), spacing_wl);

  BasicAfCurves<Scalar> curves;
  curves.distance_wl =
      Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::LinSpaced(samples, log(limits.d_min_wl / Scalar(2)),
                                                          log(Scalar(4) * limits.d_max_wl))
          .array()
          .exp();
  const auto beams = static_cast<Eigen::Index>(plan.beams.size());
  curves.values.resize(samples, beams + 1);

  for (Eigen::Index b = 0; b <= beams; ++b) {
    const bool far = b == beams;
    const BasicFocusedArrayFactor<Scalar> af(layout, far ? std::nullopt : std::optional<Scalar>(plan.beams[b].focal_wl));
    for (Eigen::Index i = 0; i < samples; ++i)
      curves.values(i, b) = af(curves.distance_wl(i));
    curves.names.push_back(far ? std::string("af_far_field") : "af_beam_" + std::to_string(b + 1));
  }
  return curves;
}

template class BasicFocusedArrayFactor<double>;
template class BasicFocusedArrayFactor<long double>;
template double array_factor(const ElementLayout &, std::optional<double>, double);
template BeamEdges find_3db_edges_numeric(const ElementLayout &, double);
template BeamspotPlan fit_beamspots(const ApertureConfig &);
template BasicBeamspotPlan<long double> fit_beamspots(const BasicApertureConfig<long double> &);
template AfCurves emit_af_curves(const ApertureConfig &, const BeamspotPlan &, Eigen::Index, double);

} // namespace nearfield
