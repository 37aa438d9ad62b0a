// SPDX-License-Identifier: Apache-2.0
#include "nearfield/sizing.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

#include "nearfield/metrics.hpp"

namespace nearfield {

namespace {

// Smallest D in (lo, inf) with satisfied(D), given !satisfied(lo) and a
// predicate that stays true once it turns true.
double bisect_threshold(double lo, const std::function<bool(double)> &satisfied)
{
  double hi = std::max(2.0 * lo, 1.0);
  while (!satisfied(hi)) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e12)
      throw std::invalid_argument("requirement not reachable by any practical aperture");
  }
  while (hi - lo > kSizingTolerance) {
    const double mid = 0.5 * (lo + hi);
    (satisfied(mid) ? hi : lo) = mid;
  }
  return hi;
}

} // namespace

double min_aperture_for_span(ArrayGeometry geometry, Mode mode, double beta, double min_span_wl)
{
  if (!(min_span_wl >= 0.0))
    throw std::invalid_argument("required near-field span must be non-negative");
  // The span is increasing in D beyond alpha*beta/4 and zero at alpha*beta/2.
  const double zero_span = alpha_for(geometry, mode) * beta / 2.0;
  if (min_span_wl == 0.0)
    return zero_span;
  return bisect_threshold(zero_span, [&](double d) {
    return nf_span(ApertureConfig::unchecked(geometry, d, beta, mode)) >= min_span_wl;
  });
}

double min_aperture_for_beamspots(ArrayGeometry geometry, Mode mode, double beta, std::int64_t min_beamspots)
{
  if (min_beamspots < 1)
    throw std::invalid_argument("required beamspot count must be >= 1");
  const double smallest = alpha_for(geometry, mode) * beta;
  if (min_beamspots == 1)
    return smallest;
  return bisect_threshold(smallest, [&](double d) {
    return beamspot_count_closed_form(ApertureConfig::unchecked(geometry, d, beta, mode)) >= min_beamspots;
  });
}

double min_aperture_for_singular_values(ArrayGeometry geometry, std::int64_t min_singular_values)
{
  if (min_singular_values < 1)
    throw std::invalid_argument("required singular-value count must be >= 1");
  return bisect_threshold(kSizingTolerance, [&](double d) { return sv_count_power_law(geometry, d) >= min_singular_values; });
}

SizingResult size_aperture(ArrayGeometry geometry, Mode mode, double beta, const SizingRequest &request)
{
  if (request.empty())
    throw std::invalid_argument("at least one sizing requirement is needed");
  SizingResult result;
  if (request.eta)
    result.entries.push_back({"eta", *request.eta, min_aperture_for_fraction(geometry, mode, beta, *request.eta)});
  if (request.min_span_wl)
    result.entries.push_back(
        {"min_span", *request.min_span_wl, min_aperture_for_span(geometry, mode, beta, *request.min_span_wl)});
  if (request.min_beamspots)
    result.entries.push_back({"min_beamspots", static_cast<double>(*request.min_beamspots),
                              min_aperture_for_beamspots(geometry, mode, beta, *request.min_beamspots)});
  if (request.min_singular_values)
    result.entries.push_back({"min_singular_values", static_cast<double>(*request.min_singular_values),
                              min_aperture_for_singular_values(geometry, *request.min_singular_values)});

  for (const auto &e : result.entries)
    if (e.aperture_wl > result.binding_aperture_wl) {
      result.binding_aperture_wl = e.aperture_wl;
      result.binding_requirement = e.requirement;
    }
  return result;
}

} // namespace nearfield
