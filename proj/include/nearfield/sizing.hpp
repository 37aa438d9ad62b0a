// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nearfield/geometry.hpp"

// Inverse sizing: smallest aperture (in wavelengths) meeting a requirement.
// Requirements other than eta are inverted by bisection on monotone metrics
// to an absolute tolerance of 1e-4 wavelengths; the returned aperture always
// satisfies the requirement.

namespace nearfield {

inline constexpr double kSizingTolerance = 1e-4;

double min_aperture_for_span(ArrayGeometry geometry, Mode mode, double beta, double min_span_wl);
double min_aperture_for_beamspots(ArrayGeometry geometry, Mode mode, double beta, std::int64_t min_beamspots);
double min_aperture_for_singular_values(ArrayGeometry geometry, std::int64_t min_singular_values);

struct SizingRequest
{
  std::optional<double> eta;
  std::optional<double> min_span_wl;
  std::optional<std::int64_t> min_beamspots;
  std::optional<std::int64_t> min_singular_values;

  bool empty() const { return !eta && !min_span_wl && !min_beamspots && !min_singular_values; }
};

struct SizingResult
{
  struct Entry
  {
    std::string requirement; // "eta", "min_span", "min_beamspots", "min_singular_values"
    double requested;
    double aperture_wl;
  };

  std::vector<Entry> entries;
  std::string binding_requirement;
  double binding_aperture_wl = 0.0;
};

SizingResult size_aperture(ArrayGeometry geometry, Mode mode, double beta, const SizingRequest &request);

} // namespace nearfield
