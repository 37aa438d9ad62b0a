// SPDX-License-Identifier: Apache-2.0
#pragma once

// Randomized property suites shared by the unit tests and the acceptance
// runner. Each suite draws `cases` inputs from a seeded generator and reports
// how many violated the property.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "nearfield/cli.hpp"
#include "nearfield/metrics.hpp"
#include "nearfield/sv_analysis.hpp"
#include "nearfield/wavefield.hpp"

namespace nearfield::testing {

struct PropertyReport
{
  int cases = 0;
  int failures = 0;
  std::string first_failure;

  bool ok() const { return cases > 0 && failures == 0; }
  void fail(const std::string &what)
  {
    if (failures++ == 0)
      first_failure = what;
  }
};

inline ArrayGeometry random_geometry(std::mt19937_64 &rng)
{
  return kAllGeometries[std::uniform_int_distribution<int>(0, 3)(rng)];
}

inline Mode random_mode(std::mt19937_64 &rng) { return kAllModes[std::uniform_int_distribution<int>(0, 1)(rng)]; }

inline ApertureConfig random_config(std::mt19937_64 &rng, double min_aperture = 1.0, double max_aperture = 500.0)
{
  const auto g = random_geometry(rng);
  const auto m = random_mode(rng);
  const double beta = std::uniform_real_distribution<double>(1.2, 3.0)(rng);
  const double log_d = std::uniform_real_distribution<double>(std::log(min_aperture), std::log(max_aperture))(rng);
  return ApertureConfig(g, std::exp(log_d), beta, m);
}

// Beamdepth is strictly increasing in the focal distance on (0, d_max).
inline PropertyReport beamdepth_monotone_in_distance(int cases, unsigned seed = 11)
{
  std::mt19937_64 rng(seed);
  PropertyReport report;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < cases; ++i) {
    const auto c = random_config(rng);
    const double d_max = nf_limits(c).d_max_wl;
    double a = u(rng) * d_max, b = u(rng) * d_max;
    if (a > b)
      std::swap(a, b);
    if (!(a > 0.0) || !(b > a) || b >= d_max)
      continue;
    ++report.cases;
    if (!(beamdepth(c, a) < beamdepth(c, b)))
      report.fail("BD(" + std::to_string(a) + ") >= BD(" + std::to_string(b) + ")");
  }
  return report;
}

// Minimum beamdepth is strictly decreasing in the aperture beyond alpha*beta/2.
inline PropertyReport min_beamdepth_monotone_in_aperture(int cases, unsigned seed = 12)
{
  std::mt19937_64 rng(seed);
  PropertyReport report;
  for (int i = 0; i < cases; ++i) {
    const auto base = random_config(rng);
    const double floor_d = base.alpha() * base.beta() / 2.0;
    std::uniform_real_distribution<double> factor(1.0 + 1e-6, 50.0);
    double d1 = floor_d * factor(rng), d2 = floor_d * factor(rng);
    if (d1 > d2)
      std::swap(d1, d2);
    if (!(d2 > d1))
      continue;
    ++report.cases;
    const double bd1 = min_beamdepth(base.with_aperture(d1));
    const double bd2 = min_beamdepth(base.with_aperture(d2));
    if (!(bd1 > bd2) || !(bd2 > asymptotic_beamdepth(base)))
      report.fail("min BD not decreasing between D=" + std::to_string(d1) + " and " + std::to_string(d2));
  }
  return report;
}

// span(2D)/span(D) = 4 + 2 alpha beta / (2D - alpha beta): above 4, decreasing, -> 4.
inline PropertyReport span_ratio_tends_to_four(int cases, unsigned seed = 13)
{
  std::mt19937_64 rng(seed);
  PropertyReport report;
  for (int i = 0; i < cases; ++i) {
    const auto base = random_config(rng);
    const double ab = base.alpha() * base.beta();
    const double d = std::exp(std::uniform_real_distribution<double>(std::log(ab / 2.0 * 1.01), std::log(1e6))(rng));
    const auto c = base.with_aperture(d);
    ++report.cases;
    const double ratio = nf_limits(c.with_aperture(2 * d)).span_wl / nf_limits(c).span_wl;
    const double ratio_further = nf_limits(c.with_aperture(4 * d)).span_wl / nf_limits(c.with_aperture(2 * d)).span_wl;
    const double excess = 2.0 * ab / (2.0 * d - ab);
    const bool ok = ratio > 4.0 && ratio_further < ratio && std::abs((ratio - 4.0) - excess) <= 1e-7 * ratio &&
                    (d < 1e4 || std::abs(ratio - 4.0) < 1e-2);
    if (!ok)
      report.fail("span ratio " + std::to_string(ratio) + " at D=" + std::to_string(d));
  }
  return report;
}

// beamdepth = right - left edge, to 1e-9 relative.
inline PropertyReport beamdepth_matches_edges(int cases, unsigned seed = 14)
{
  std::mt19937_64 rng(seed);
  PropertyReport report;
  std::uniform_real_distribution<double> u(1e-6, 1.0 - 1e-6);
  for (int i = 0; i < cases; ++i) {
    const auto c = random_config(rng);
    const double d = u(rng) * nf_limits(c).d_max_wl;
    ++report.cases;
    const double bd = beamdepth(c, d);
    const double edges = beam_edges(c, d).depth();
    if (!(std::abs(bd - edges) <= 1e-9 * bd))
      report.fail("BD " + std::to_string(bd) + " vs edges " + std::to_string(edges));
  }
  return report;
}

// Normalized spectrum and significant count are unchanged by positive scaling.
inline PropertyReport spectrum_scale_invariance(int cases, unsigned seed = 15)
{
  std::mt19937_64 rng(seed);
  PropertyReport report;
  std::uniform_int_distribution<int> dim(2, 12);
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_real_distribution<double> log_scale(-8.0, 8.0);
  for (int i = 0; i < cases; ++i) {
    Eigen::MatrixXcd h(dim(rng), dim(rng));
    // Decaying columns give spectra that straddle the threshold.
    for (Eigen::Index c = 0; c < h.cols(); ++c)
      for (Eigen::Index r = 0; r < h.rows(); ++r)
        h(r, c) = std::complex<double>(n(rng), n(rng)) * std::pow(0.4, double(c));
    const double scale = std::pow(10.0, log_scale(rng));
    ++report.cases;
    const auto a = sv_spectrum(h);
    const auto b = sv_spectrum(h * scale);
    const auto la = a.linear_powers();
    const auto lb = b.linear_powers();
    bool ok = a.significant_count == b.significant_count && std::abs(la.sum() - 1.0) < 1e-9 &&
              std::abs(lb.sum() - 1.0) < 1e-9;
    for (Eigen::Index k = 0; ok && k < la.size(); ++k)
      ok = std::abs(la(k) - lb(k)) <= 1e-9;
    if (!ok)
      report.fail("spectrum changed under scaling by " + std::to_string(scale));
  }
  return report;
}

inline std::string read_file(const std::string &path)
{
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline std::string exact(double v)
{
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", v);
  return buffer;
}

// A configuration given in meters + carrier and the same one given in
// wavelengths produce byte-identical data files.
inline PropertyReport unit_round_trip(int cases, const std::string &scratch_dir, unsigned seed = 16)
{
  std::mt19937_64 rng(seed);
  PropertyReport report;
  std::uniform_real_distribution<double> log_d(std::log(15.0), std::log(400.0));
  std::uniform_real_distribution<double> log_ghz(std::log(0.5), std::log(300.0));
  std::filesystem::create_directories(scratch_dir);
  const std::string wl_path = scratch_dir + "/round_trip_wl.json";
  const std::string m_path = scratch_dir + "/round_trip_m.json";
  const char *geometries[] = {"ula", "uca", "ura", "upca"};

  for (int i = 0; i < cases; ++i) {
    const double d = std::exp(log_d(rng));
    const double ghz = std::exp(log_ghz(rng));
    const double meters = d * kSpeedOfLight / (ghz * 1e9);
    const std::string geometry = geometries[i % 4];
    std::ostringstream sink;
    const int s1 = cli::run({"metrics", "--geometry", geometry, "--aperture-wl", exact(d), "--format", "machine",
                             "--output", wl_path},
                            sink, sink);
    const int s2 = cli::run({"metrics", "--geometry", geometry, "--aperture-m", exact(meters), "--carrier-ghz", exact(ghz),
                             "--format", "machine", "--output", m_path},
                            sink, sink);
    ++report.cases;
    if (s1 != 0 || s2 != 0 || read_file(wl_path) != read_file(m_path))
      report.fail("D=" + exact(d) + " wl vs " + exact(meters) + " m at " + exact(ghz) + " GHz");
  }
  return report;
}

// MIMO focuses tighter than SIMO/MISO: smaller alpha, smaller minimum
// beamdepth, deeper near field and at least as many beamspots.
inline PropertyReport mimo_dominates(int cases, unsigned seed = 17)
{
  std::mt19937_64 rng(seed);
  PropertyReport report;
  for (int i = 0; i < cases; ++i) {
    const auto c = random_config(rng, 16.0, 500.0);
    const ApertureConfig simo(c.geometry(), c.aperture_wl(), c.beta(), Mode::SimoMiso);
    const ApertureConfig mimo(c.geometry(), c.aperture_wl(), c.beta(), Mode::Mimo);
    ++report.cases;
    bool ok = mimo.alpha() < simo.alpha() && nf_limits(mimo).d_max_wl > nf_limits(simo).d_max_wl &&
              min_beamdepth(mimo) < min_beamdepth(simo);
    if (ok && c.aperture_wl() >= simo.alpha() * simo.beta())
      ok = beamspot_count_closed_form(mimo) >= beamspot_count_closed_form(simo);
    if (!ok)
      report.fail(std::string(to_string(c.geometry())) + " D=" + std::to_string(c.aperture_wl()));
  }
  return report;
}

// At the aperture sized for fraction eta, BD_min / BD_asym = eta / (2 eta - 1).
inline PropertyReport fraction_ratio(int cases, unsigned seed = 18)
{
  std::mt19937_64 rng(seed);
  PropertyReport report;
  std::uniform_real_distribution<double> u_eta(0.51, 0.999);
  for (int i = 0; i < cases; ++i) {
    const auto c = random_config(rng);
    const double eta = u_eta(rng);
    const double d = min_aperture_for_fraction(c.geometry(), c.mode(), c.beta(), eta);
    const auto sized = ApertureConfig::unchecked(c.geometry(), d, c.beta(), c.mode());
    ++report.cases;
    const double ratio = min_beamdepth(sized) / asymptotic_beamdepth(sized);
    const double expected = eta / (2.0 * eta - 1.0);
    if (!(std::abs(ratio - expected) <= 1e-9 * expected))
      report.fail("eta=" + std::to_string(eta) + " ratio " + std::to_string(ratio));
  }
  return report;
}

// Layouts are centred on the origin and fit inside the aperture diameter.
inline PropertyReport layout_centred(int cases, unsigned seed = 19)
{
  std::mt19937_64 rng(seed);
  PropertyReport report;
  std::uniform_real_distribution<double> u_d(1.0, 40.0);
  std::uniform_real_distribution<double> u_s(0.2, 0.5);
  for (int i = 0; i < cases; ++i) {
    const auto g = random_geometry(rng);
    const double d = u_d(rng);
    const double s = u_s(rng);
    const auto layout = generate_layout(g, d, s);
    ++report.cases;
    const Eigen::RowVector3d centroid = layout.positions.colwise().mean();
    const double extent = layout.positions.rowwise().norm().maxCoeff();
    if (!(centroid.norm() <= 1e-9 * d) || !(extent <= d / 2.0 * (1.0 + 1e-9)) || layout.size() < 2)
      report.fail(std::string(to_string(g)) + " D=" + std::to_string(d) + " s=" + std::to_string(s));
  }
  return report;
}

// The greedy packer is deterministic, tiles contiguously inside the near
// field and beats the closed-form count by at most one.
inline PropertyReport packer_consistent(int cases, unsigned seed = 20)
{
  std::mt19937_64 rng(seed);
  PropertyReport report;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < cases; ++i) {
    const auto base = random_config(rng);
    const double floor_d = base.alpha() * base.beta();
    const auto c = base.with_aperture(floor_d + u(rng) * (300.0 - floor_d));
    const auto a = fit_beamspots(c);
    const auto b = fit_beamspots(c);
    ++report.cases;
    const double d_max = nf_limits(c).d_max_wl;
    bool ok = a.count() == b.count() && a.count() >= 1;
    for (std::size_t k = 0; ok && k < a.beams.size(); ++k) {
      ok = a.beams[k].focal_wl == b.beams[k].focal_wl && a.beams[k].focal_wl <= d_max * (1.0 + 1e-12);
      if (ok && k > 0)
        ok = std::abs(a.beams[k].left_wl - a.beams[k - 1].right_wl) <= 1e-9 * a.beams[k].left_wl;
    }
    const auto gap = static_cast<std::int64_t>(a.count()) - beamspot_count_closed_form(c);
    if (!ok || gap < 0 || gap > 1)
      report.fail(std::string(to_string(c.geometry())) + " D=" + std::to_string(c.aperture_wl()) + " gap " +
                  std::to_string(gap));
  }
  return report;
}

} // namespace nearfield::testing
