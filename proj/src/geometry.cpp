// SPDX-License-Identifier: Apache-2.0
#include "nearfield/geometry.hpp"

#include <algorithm>
#include <cctype>

namespace nearfield {

namespace {

std::string lowered(std::string_view text)
{
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  std::replace(out.begin(), out.end(), '_', '-');
  std::replace(out.begin(), out.end(), '/', '-');
  return out;
}

} // namespace

std::string_view to_string(ArrayGeometry geometry) noexcept
{
  switch (geometry) {
  case ArrayGeometry::ULA: return "ULA";
  case ArrayGeometry::UCA: return "UCA";
  case ArrayGeometry::URA: return "URA";
  case ArrayGeometry::UPCA: return "UPCA";
  }
  return "?";
}

std::string_view to_string(Mode mode) noexcept { return mode == Mode::Mimo ? "MIMO" : "SIMO/MISO"; }

std::optional<ArrayGeometry> parse_geometry(std::string_view text)
{
  const auto key = lowered(text);
  for (auto g : kAllGeometries)
    if (key == lowered(to_string(g)))
      return g;
  return std::nullopt;
}

std::optional<Mode> parse_mode(std::string_view text)
{
  const auto key = lowered(text);
  if (key == "simo-miso" || key == "simo" || key == "miso")
    return Mode::SimoMiso;
  if (key == "mimo")
    return Mode::Mimo;
  return std::nullopt;
}

double to_wavelengths(double aperture_m, double carrier_hz)
{
  if (!(aperture_m > 0.0) || !(carrier_hz > 0.0))
    throw std::invalid_argument("aperture and carrier frequency must be positive");
  return aperture_m * carrier_hz / kSpeedOfLight;
}

} // namespace nearfield
