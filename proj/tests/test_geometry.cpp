// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "nearfield/geometry.hpp"

using namespace nearfield;

namespace {

double max_pairwise(const ElementLayout &layout)
{
  double best = 0.0;
  const auto &p = layout.positions;
  for (Eigen::Index i = 0; i < p.rows(); ++i)
    for (Eigen::Index j = i + 1; j < p.rows(); ++j)
      best = std::max(best, (p.row(i) - p.row(j)).norm());
  return best;
}

} // namespace

TEST_CASE("constants match the tabulated values")
{
  CHECK(constants_for(ArrayGeometry::ULA).alpha_simo_miso == 6.952);
  CHECK(constants_for(ArrayGeometry::URA).alpha_mimo == 7.068);
  CHECK(constants_for(ArrayGeometry::UPCA).kappa == 0.383);
  CHECK(constants_for(ArrayGeometry::UPCA).gamma == 0.707);

  const auto uca = constants_for(ArrayGeometry::UCA);
  CHECK(uca.alpha_simo_miso == 5.737);
  CHECK(uca.alpha_mimo == 4.148);
  CHECK(uca.kappa == 0.503);
  CHECK(uca.gamma == 0.650);

  for (auto g : kAllGeometries) {
    const auto c = constants_for(g);
    CHECK(c.alpha_simo_miso > 0);
    CHECK(c.alpha_mimo > 0);
    CHECK(c.kappa > 0);
    CHECK(c.gamma > 0);
    CHECK(c.alpha_mimo < c.alpha_simo_miso);
  }
}

TEST_CASE("geometry and mode names round-trip")
{
  for (auto g : kAllGeometries)
    CHECK(parse_geometry(to_string(g)) == g);
  CHECK(parse_geometry("upca") == ArrayGeometry::UPCA);
  CHECK_FALSE(parse_geometry("hexagon").has_value());
  CHECK(parse_mode("simo-miso") == Mode::SimoMiso);
  CHECK(parse_mode("SIMO/MISO") == Mode::SimoMiso);
  CHECK(parse_mode("MIMO") == Mode::Mimo);
  CHECK_FALSE(parse_mode("siso").has_value());
}

TEST_CASE("aperture config validates beta and aperture")
{
  const ApertureConfig config(ArrayGeometry::URA, 32.0);
  CHECK(config.beta() == 1.2);
  CHECK(config.mode() == Mode::SimoMiso);
  CHECK(config.alpha() == 9.937);
  CHECK(ApertureConfig(ArrayGeometry::URA, 32.0, 1.2, Mode::Mimo).alpha() == 7.068);

  CHECK_THROWS_AS(ApertureConfig(ArrayGeometry::ULA, 32.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(ApertureConfig(ArrayGeometry::ULA, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(ApertureConfig(ArrayGeometry::ULA, -3.0), std::invalid_argument);
  CHECK_NOTHROW(ApertureConfig::unchecked(ArrayGeometry::ULA, 32.0, 0.5));
  CHECK_THROWS_AS(ApertureConfig::unchecked(ArrayGeometry::ULA, 32.0, 0.0), std::invalid_argument);
  CHECK(ApertureConfig::unchecked(ArrayGeometry::ULA, 32.0, 0.5).with_aperture(40.0).beta() == 0.5);
}

TEST_CASE("ULA layout")
{
  const auto layout = generate_layout(ArrayGeometry::ULA, 32.0, 0.5);
  REQUIRE(layout.size() == 65);
  CHECK(layout.positions.col(1).isZero());
  CHECK(layout.positions.col(2).isZero());
  CHECK(max_pairwise(layout) == doctest::Approx(32.0).epsilon(1e-12));
  for (Eigen::Index i = 1; i < layout.size(); ++i)
    CHECK(layout.positions(i, 0) - layout.positions(i - 1, 0) <= 0.5 + 1e-12);
}

TEST_CASE("URA layout is a square whose diagonal is the aperture")
{
  const auto layout = generate_layout(ArrayGeometry::URA, 32.0, 0.5);
  const double side = 32.0 / std::sqrt(2.0);
  CHECK(layout.positions.col(0).maxCoeff() - layout.positions.col(0).minCoeff() == doctest::Approx(side));
  CHECK(layout.positions.col(1).maxCoeff() - layout.positions.col(1).minCoeff() == doctest::Approx(side));
  CHECK(layout.positions.col(2).isZero());
  const auto m = static_cast<Eigen::Index>(std::round(std::sqrt(double(layout.size()))));
  CHECK(m * m == layout.size());
  CHECK(side / double(m - 1) <= 0.5);
  CHECK(max_pairwise(layout) == doctest::Approx(32.0).epsilon(1e-12));
}

TEST_CASE("UCA layout: ring with arc spacing at most the requested spacing")
{
  const auto layout = generate_layout(ArrayGeometry::UCA, 10.0, 0.5);
  REQUIRE(layout.size() == 63);
  double max_gap = 0.0;
  for (Eigen::Index i = 0; i < layout.size(); ++i) {
    const Eigen::RowVector3d p = layout.positions.row(i);
    CHECK(p.norm() == doctest::Approx(5.0));
    CHECK(p(1) == 0.0);
    const Eigen::RowVector3d q = layout.positions.row((i + 1) % layout.size());
    const double angle = std::acos(std::clamp(p.dot(q) / 25.0, -1.0, 1.0));
    max_gap = std::max(max_gap, 5.0 * angle);
  }
  CHECK(max_gap <= 0.5);
  CHECK(max_gap == doctest::Approx(M_PI * 10.0 / 63.0));
}

TEST_CASE("UPCA layout is a lattice clipped to the disk")
{
  const auto layout = generate_layout(ArrayGeometry::UPCA, 12.0, 0.5);
  const Eigen::VectorXd radius = layout.positions.leftCols<2>().rowwise().norm();
  CHECK(radius.maxCoeff() <= 6.0 + 1e-9);
  CHECK(radius.maxCoeff() == doctest::Approx(6.0));
  CHECK(layout.positions.col(2).isZero());
  // Every lattice point inside the disk is present: 0.25 wl^2 per element.
  CHECK(double(layout.size()) * 0.25 == doctest::Approx(M_PI * 36.0).epsilon(0.05));
}

TEST_CASE("layouts are centred for every geometry and size")
{
  for (auto g : kAllGeometries)
    for (double d : {1.0, 7.3, 20.0, 33.3, 64.0}) {
      const auto layout = generate_layout(g, d, 0.5);
      CHECK(layout.positions.colwise().mean().norm() < 1e-9);
    }
}

TEST_CASE("layout input validation")
{
  CHECK_THROWS_AS(generate_layout(ArrayGeometry::ULA, 10.0, 0.6), std::invalid_argument);
  CHECK_THROWS_AS(generate_layout(ArrayGeometry::ULA, 10.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(generate_layout(ArrayGeometry::ULA, -1.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(generate_layout(ArrayGeometry::ULA, 0.0, 0.5), std::invalid_argument);
}

TEST_CASE("halving the spacing keeps the extent within one spacing")
{
  for (auto g : kAllGeometries)
    for (double d : {3.0, 5.7, 9.2, 14.0}) {
      const double coarse = max_pairwise(generate_layout(g, d, 0.5));
      const double fine = max_pairwise(generate_layout(g, d, 0.25));
      CHECK(std::abs(coarse - fine) <= 0.5);
    }
}

TEST_CASE("layouts templated on long double")
{
  const auto layout = generate_layout<long double>(ArrayGeometry::URA, 16.0L, 0.5L);
  CHECK(layout.size() == generate_layout(ArrayGeometry::URA, 16.0, 0.5).size());
}

TEST_CASE("unit conversion uses the exact speed of light")
{
  CHECK(to_wavelengths(1.0, 29.9792458e9) == doctest::Approx(100.0).epsilon(1e-14));
  CHECK(to_wavelengths(0.5, 5.99584916e9) == doctest::Approx(10.0).epsilon(1e-14));
  CHECK(to_wavelengths(0.3, 3.0e9) == doctest::Approx(0.3 * 3.0e9 / 299792458.0).epsilon(1e-15));
  CHECK(to_wavelengths(0.3, 3.0e9) == doctest::Approx(3.00207686).epsilon(1e-8));
  CHECK_THROWS_AS(to_wavelengths(0.0, 1e9), std::invalid_argument);
  CHECK_THROWS_AS(to_wavelengths(1.0, -1e9), std::invalid_argument);
}
