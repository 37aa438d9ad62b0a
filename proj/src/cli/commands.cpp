// SPDX-License-Identifier: Apache-2.0
#include "nearfield/cli.hpp"

#include <cstdlib>
#include <future>
#include <ostream>
#include <sstream>
#include <variant>

#include <CLI11.hpp>

#include "nearfield/metrics.hpp"
#include "nearfield/sizing.hpp"
#include "nearfield/sv_analysis.hpp"
#include "nearfield/wavefield.hpp"
#include "output.hpp"

namespace nearfield::cli {

namespace {

using json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitComputation = 1;
constexpr int kExitUsage = 2;

class UsageError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

double default_beta()
{
  if (const char *env = std::getenv("NEARFIELD_BETA")) {
    try {
      return std::stod(env);
    } catch (const std::exception &) {
      throw UsageError(std::string("NEARFIELD_BETA is not a number: ") + env);
    }
  }
  return kMinimumBeta;
}

struct CommonOptions
{
  std::string geometry = "ula";
  std::string mode = "simo-miso";
  double beta = kMinimumBeta;
  std::string format = "table";
  std::string output;

  ArrayGeometry parsed_geometry() const
  {
    if (auto g = parse_geometry(geometry))
      return *g;
    throw UsageError("unknown geometry '" + geometry + "' (expected ula, uca, ura or upca)");
  }
  Mode parsed_mode() const
  {
    if (auto m = parse_mode(mode))
      return *m;
    throw UsageError("unknown mode '" + mode + "' (expected simo-miso or mimo)");
  }
  bool machine() const { return format == "machine"; }
};

struct ApertureInput
{
  std::optional<double> wavelengths;
  std::optional<double> meters;
  std::optional<double> carrier_ghz;
  std::optional<double> carrier_hz;

  double resolve() const
  {
    if (wavelengths && meters)
      throw UsageError("aperture given both in wavelengths and in meters; pass only one of --aperture-wl, --aperture-m");
    if (wavelengths)
      return *wavelengths;
    if (!meters)
      throw UsageError("an aperture is required: --aperture-wl, or --aperture-m with a carrier");
    if (carrier_ghz && carrier_hz)
      throw UsageError("carrier given twice; pass only one of --carrier-ghz, --carrier-hz");
    if (!carrier_ghz && !carrier_hz)
      throw UsageError("--aperture-m needs --carrier-ghz or --carrier-hz");
    return to_wavelengths(*meters, carrier_hz ? *carrier_hz : *carrier_ghz * 1e9);
  }
};

void add_common(CLI::App &cmd, CommonOptions &common, bool with_geometry = true)
{
  if (with_geometry)
    cmd.add_option("--geometry,-g", common.geometry, "Array geometry: ula, uca, ura, upca")->capture_default_str();
  cmd.add_option("--beta", common.beta, "Minimum distance as a multiple of the aperture (env NEARFIELD_BETA)")
      ->capture_default_str();
  cmd.add_option("--mode", common.mode, "simo-miso or mimo")->capture_default_str();
  cmd.add_option("--format", common.format, "table or machine")
      ->check(CLI::IsMember({"table", "machine"}))
      ->capture_default_str();
  cmd.add_option("--output,-o", common.output, "Write the result to this file (plus a .manifest.json)");
}

void add_aperture(CLI::App &cmd, ApertureInput &aperture)
{
  cmd.add_option("--aperture-wl", aperture.wavelengths, "Aperture in wavelengths");
  cmd.add_option("--aperture-m", aperture.meters, "Aperture in meters (needs a carrier)");
  cmd.add_option("--carrier-ghz", aperture.carrier_ghz, "Carrier frequency in GHz");
  cmd.add_option("--carrier-hz", aperture.carrier_hz, "Carrier frequency in Hz");
}

json config_json(const ApertureConfig &config)
{
  return json{{"geometry", to_string(config.geometry())},
              {"mode", to_string(config.mode())},
              {"beta", json_number(config.beta())},
              {"alpha", json_number(config.alpha())},
              {"aperture_wl", json_number(config.aperture_wl())}};
}

ApertureConfig make_config(const CommonOptions &common, double aperture_wl)
{
  return ApertureConfig(common.parsed_geometry(), aperture_wl, common.beta, common.parsed_mode());
}

std::vector<std::pair<std::string, std::string>> flatten(const json &doc)
{
  std::vector<std::pair<std::string, std::string>> rows;
  for (const auto &[key, value] : doc.items()) {
    if (value.is_number_float())
      rows.emplace_back(key, format_number(value.get<double>()));
    else if (value.is_string())
      rows.emplace_back(key, value.get<std::string>());
    else if (value.is_null())
      rows.emplace_back(key, "n/a");
    else if (!value.is_array() && !value.is_object())
      rows.emplace_back(key, value.dump());
  }
  return rows;
}

// Emits a report either to stdout or to --output, with its manifest.
void emit(const CommonOptions &common, const std::string &text, const std::vector<std::string> &command,
          const json &configs, std::ostream &out)
{
  if (common.output.empty()) {
    out << text;
    return;
  }
  write_file(common.output, text);
  write_manifest(common.output, command, configs);
}

struct Context
{
  std::vector<std::string> command;
  std::ostream &out;
  std::ostream &err;
  int status = kExitOk;

  void fail(const std::string &message)
  {
    err << "error: " << message << '\n';
    status = std::max(status, kExitComputation);
  }
};

// ---------------------------------------------------------------------------

void cmd_metrics(Context &ctx, const CommonOptions &common, const ApertureInput &aperture)
{
  const auto config = make_config(common, aperture.resolve());
  const auto limits = nf_limits(config);

  json report = config_json(config);
  report["fraunhofer_wl"] = json_number(limits.fraunhofer_wl);
  report["d_min_wl"] = json_number(limits.d_min_wl);
  report["d_max_wl"] = json_number(limits.d_max_wl);
  report["span_wl"] = json_number(limits.span_wl);
  report["asymptotic_beamdepth_wl"] = json_number(asymptotic_beamdepth(config));
  try {
    report["min_beamdepth_wl"] = json_number(min_beamdepth(config));
  } catch (const DomainError &e) {
    report["min_beamdepth_wl"] = nullptr;
    ctx.fail(std::string(e.what()) + " (alpha*beta/2 = " + format_number(config.alpha() * config.beta() / 2) +
             " wavelengths)");
  }
  try {
    report["n_bd"] = beamspot_count_closed_form(config);
  } catch (const DomainError &e) {
    report["n_bd"] = nullptr;
    ctx.fail(std::string(e.what()) + " (alpha*beta = " + format_number(config.alpha() * config.beta()) + " wavelengths)");
  }
  report["n_sv_power_law"] = sv_count_power_law(config.geometry(), config.aperture_wl());

  const std::string text = common.machine() ? report.dump(2) + "\n" : key_value_table(flatten(report));
  emit(common, text, ctx.command, json::array({config_json(config)}), ctx.out);
}

struct SizeOptions
{
  std::optional<double> eta;
  std::optional<double> min_span;
  std::optional<std::int64_t> min_nbd;
  std::optional<std::int64_t> min_nsv;
};

void cmd_size(Context &ctx, const CommonOptions &common, const SizeOptions &opts)
{
  const SizingRequest request{opts.eta, opts.min_span, opts.min_nbd, opts.min_nsv};
  if (request.empty())
    throw UsageError("size needs at least one of --eta, --min-span, --min-nbd, --min-nsv");
  const auto geometry = common.parsed_geometry();
  const auto mode = common.parsed_mode();
  const auto result = size_aperture(geometry, mode, common.beta, request);

  json report{{"geometry", to_string(geometry)}, {"mode", to_string(mode)}, {"beta", json_number(common.beta)}};
  json entries = json::array();
  for (const auto &e : result.entries)
    entries.push_back({{"requirement", e.requirement}, {"requested", json_number(e.requested)},
                       {"aperture_wl", json_number(e.aperture_wl)}});
  report["requirements"] = entries;
  report["binding_requirement"] = result.binding_requirement;
  report["binding_aperture_wl"] = json_number(result.binding_aperture_wl);

  std::string text;
  if (common.machine()) {
    text = report.dump(2) + "\n";
  } else {
    auto rows = flatten(report);
    for (const auto &e : result.entries)
      rows.emplace_back(e.requirement + " >= " + format_number(e.requested), format_number(e.aperture_wl) + " wl");
    text = key_value_table(rows);
  }
  emit(common, text, ctx.command, json::array({report}), ctx.out);
}

struct BeamspotOptions
{
  bool numeric_edges = false;
  double spacing = 0.1;
  std::string emit_curves;
  Eigen::Index samples = 1000;
};

void cmd_beamspots(Context &ctx, const CommonOptions &common, const ApertureInput &aperture, const BeamspotOptions &opts)
{
  const auto config = make_config(common, aperture.resolve());
  const auto plan = fit_beamspots(config);

  std::optional<ElementLayout> layout;
  if (opts.numeric_edges || !opts.emit_curves.empty())
    layout = generate_layout(config.geometry(), config.aperture_wl(), opts.spacing);

  json report = config_json(config);
  report["count"] = plan.count();
  report["closed_form_count"] = beamspot_count_closed_form(config);
  report["covered_start_wl"] = json_number(plan.covered_start_wl);
  report["covered_end_wl"] = json_number(plan.covered_end_wl);
  json beams = json::array();
  std::ostringstream table;
  table << "beam  focal_wl  left_wl  right_wl" << (opts.numeric_edges ? "  numeric_left_wl  numeric_right_wl" : "")
        << '\n';
  for (std::size_t i = 0; i < plan.beams.size(); ++i) {
    const auto &b = plan.beams[i];
    json row{{"focal_wl", json_number(b.focal_wl)}, {"left_wl", json_number(b.left_wl)}, {"right_wl", json_number(b.right_wl)}};
    table << i + 1 << "  " << format_number(b.focal_wl) << "  " << format_number(b.left_wl) << "  "
          << format_number(b.right_wl);
    if (opts.numeric_edges) {
      try {
        const auto numeric = find_3db_edges_numeric(*layout, b.focal_wl);
        row["numeric_left_wl"] = json_number(numeric.left_wl);
        row["numeric_right_wl"] = json_number(numeric.right_wl);
        table << "  " << format_number(numeric.left_wl) << "  " << format_number(numeric.right_wl);
      } catch (const DomainError &e) {
        row["numeric_left_wl"] = nullptr;
        row["numeric_right_wl"] = nullptr;
        table << "  n/a  n/a";
        ctx.fail("beam " + std::to_string(i + 1) + ": " + e.what());
      }
    }
    table << '\n';
    beams.push_back(row);
  }
  report["beams"] = beams;

  std::string text;
  if (common.machine()) {
    text = report.dump(2) + "\n";
  } else {
    text = key_value_table(flatten(report)) + table.str();
  }
  emit(common, text, ctx.command, json::array({config_json(config)}), ctx.out);

  if (!opts.emit_curves.empty()) {
    const auto curves = emit_af_curves(config, plan, opts.samples, opts.spacing);
    std::vector<std::string> header{"distance_wl"};
    header.insert(header.end(), curves.names.begin(), curves.names.end());
    Eigen::MatrixXd rows(curves.values.rows(), curves.values.cols() + 1);
    rows << curves.distance_wl, curves.values;
    write_file(opts.emit_curves, to_csv(header, rows));
    write_manifest(opts.emit_curves, ctx.command, json::array({config_json(config)}));
  }
}

struct SweepCliOptions
{
  std::vector<double> apertures;
  double threshold = kDefaultThresholdDb;
  bool fit = false;
  double spacing = kMaxElementSpacing;
  Eigen::Index range_samples = 0;
};

void cmd_svsweep(Context &ctx, const CommonOptions &common, const SweepCliOptions &opts)
{
  if (opts.apertures.empty())
    throw UsageError("svsweep needs a non-empty --apertures list");
  const auto geometry = common.parsed_geometry();
  SweepOptions sweep;
  sweep.beta = common.beta;
  sweep.mode = common.parsed_mode();
  sweep.threshold_db = opts.threshold;
  sweep.spacing_wl = opts.spacing;
  sweep.range_samples = opts.range_samples;

  using Outcome = std::variant<SvCountSample, std::string>;
  std::vector<std::future<Outcome>> tasks;
  for (const double d : opts.apertures)
    tasks.push_back(std::async(std::launch::async, [=]() -> Outcome {
      try {
        return sv_count_at(geometry, d, sweep);
      } catch (const std::exception &e) {
        return std::string(e.what());
      }
    }));

  json rows = json::array();
  Eigen::MatrixXd csv(static_cast<Eigen::Index>(opts.apertures.size()), 6);
  std::vector<std::pair<double, double>> fit_points;
  std::ostringstream table;
  table << "aperture_wl  significant_count  power_law_count  range_samples  elements  significant_power\n";
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const double d = opts.apertures[i];
    const auto outcome = tasks[i].get();
    const auto r = static_cast<Eigen::Index>(i);
    if (const auto *failure = std::get_if<std::string>(&outcome)) {
      ctx.fail("aperture " + format_number(d) + ": " + *failure);
      rows.push_back({{"aperture_wl", json_number(d)}, {"error", *failure}});
      csv.row(r) << d, NAN, NAN, NAN, NAN, NAN;
      table << format_number(d) << "  error: " << *failure << '\n';
      continue;
    }
    const auto &s = std::get<SvCountSample>(outcome);
    const auto law = sv_count_power_law(geometry, d);
    rows.push_back({{"aperture_wl", json_number(d)},
                    {"significant_count", s.significant_count},
                    {"power_law_count", law},
                    {"range_samples", s.range_samples},
                    {"elements", s.elements},
                    {"significant_power", json_number(s.significant_power)}});
    csv.row(r) << d, double(s.significant_count), double(law), double(s.range_samples), double(s.elements),
        s.significant_power;
    table << format_number(d) << "  " << s.significant_count << "  " << law << "  " << s.range_samples << "  "
          << s.elements << "  " << format_number(s.significant_power) << '\n';
    if (s.significant_count >= 1)
      fit_points.emplace_back(d, double(s.significant_count));
  }

  json report{{"geometry", to_string(geometry)},
              {"mode", to_string(sweep.mode)},
              {"beta", json_number(sweep.beta)},
              {"threshold_db", json_number(sweep.threshold_db)},
              {"spacing_wl", json_number(sweep.spacing_wl)},
              {"rows", rows}};
  if (opts.fit) {
    try {
      const auto fit = fit_power_law(fit_points);
      report["fit"] = {{"kappa", json_number(fit.kappa)},
                       {"gamma", json_number(fit.gamma)},
                       {"residual", json_number(fit.residual)},
                       {"plausible", fit.plausible()}};
      table << "fit  kappa=" << format_number(fit.kappa) << "  gamma=" << format_number(fit.gamma)
            << "  residual=" << format_number(fit.residual) << '\n';
    } catch (const std::invalid_argument &e) {
      report["fit"] = nullptr;
      ctx.fail(std::string("power-law fit: ") + e.what());
    }
  }

  ctx.out << (common.machine() ? report.dump(2) + "\n" : table.str());
  if (!common.output.empty()) {
    write_file(common.output, to_csv({"aperture_wl", "significant_count", "power_law_count", "range_samples", "elements",
                                      "significant_power"},
                                     csv));
    json configs = report;
    configs.erase("rows");
    write_manifest(common.output, ctx.command, json::array({configs}));
  }
}

struct CurveOptions
{
  std::string figure;
  std::vector<std::string> geometries{"ula", "uca", "ura", "upca"};
  std::vector<double> apertures{30.0, 60.0};
  std::optional<double> x_min;
  std::optional<double> x_max;
  Eigen::Index samples = 0;
};

void cmd_curves(Context &ctx, const CommonOptions &common, const CurveOptions &opts)
{
  if (opts.geometries.empty())
    throw UsageError("curves needs at least one geometry");
  std::vector<ArrayGeometry> geometries;
  for (const auto &g : opts.geometries) {
    CommonOptions probe = common;
    probe.geometry = g;
    geometries.push_back(probe.parsed_geometry());
  }
  const auto mode = common.parsed_mode();
  const double beta = common.beta;
  const double inf = std::numeric_limits<double>::infinity();

  std::vector<std::string> header;
  std::vector<std::function<double(double)>> columns;
  json configs = json::array();
  double lo = 0.0, hi = 0.0;
  Eigen::Index samples = opts.samples;

  if (opts.figure == "beamdepth-vs-d") {
    if (opts.apertures.empty())
      throw UsageError("beamdepth-vs-d needs --apertures");
    header.push_back("distance_wl");
    double widest = 0.0;
    for (auto g : geometries)
      for (double d : opts.apertures) {
        const ApertureConfig config(g, d, beta, mode);
        widest = std::max(widest, nf_limits(config).d_max_wl);
        header.push_back(std::string(to_string(g)) + "_D" + format_number(d) + "_beamdepth_wl");
        configs.push_back(config_json(config));
        columns.emplace_back([config, inf](double x) {
          return x < nf_limits(config).d_max_wl ? beamdepth(config, x) : inf;
        });
      }
    lo = opts.x_min.value_or(0.0);
    hi = opts.x_max.value_or(widest);
    if (samples == 0)
      samples = 501;
  } else if (opts.figure == "bdmin-vs-D" || opts.figure == "span-vs-D" || opts.figure == "nbd-vs-D") {
    header.push_back("aperture_wl");
    for (auto g : geometries) {
      const std::string name(to_string(g));
      configs.push_back({{"geometry", name}, {"mode", to_string(mode)}, {"beta", json_number(beta)}});
      const auto at = [g, beta, mode](double d) { return ApertureConfig::unchecked(g, d, beta, mode); };
      if (opts.figure == "bdmin-vs-D") {
        header.push_back(name + "_min_beamdepth_wl");
        columns.emplace_back([at, inf](double d) {
          const auto c = at(d);
          return d > c.alpha() * c.beta() / 2 ? min_beamdepth(c) : inf;
        });
      } else if (opts.figure == "span-vs-D") {
        header.push_back(name + "_span_wl");
        columns.emplace_back([at](double d) { return nf_limits(at(d)).span_wl; });
      } else {
        header.push_back(name + "_n_bd_closed_form");
        columns.emplace_back([at](double d) {
          const auto c = at(d);
          return d >= c.alpha() * c.beta() ? double(beamspot_count_closed_form(c)) : 0.0;
        });
        header.push_back(name + "_n_bd_fit");
        columns.emplace_back([at](double d) {
          const auto c = at(d);
          return d >= c.alpha() * c.beta() ? double(fit_beamspots(c).count()) : 0.0;
        });
      }
    }
    lo = opts.x_min.value_or(1.0);
    hi = opts.x_max.value_or(100.0);
    if (samples == 0)
      samples = static_cast<Eigen::Index>(std::llround((hi - lo) / 0.5)) + 1;
  } else {
    throw UsageError("unknown figure '" + opts.figure + "' (expected beamdepth-vs-d, bdmin-vs-D, span-vs-D, nbd-vs-D)");
  }

  if (!(hi > lo) || !(lo >= 0.0))
    throw UsageError("curve range must satisfy 0 <= x-min < x-max");
  if (samples < 2)
    throw UsageError("curves need at least 2 samples");

  const Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(samples, lo, hi);
  Eigen::MatrixXd rows(samples, static_cast<Eigen::Index>(columns.size()) + 1);
  rows.col(0) = x;
  for (std::size_t c = 0; c < columns.size(); ++c)
    for (Eigen::Index i = 0; i < samples; ++i)
      rows(i, static_cast<Eigen::Index>(c) + 1) = columns[c](x(i));

  const std::string text = to_csv(header, rows);
  emit(common, text, ctx.command, configs, ctx.out);
}

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
{
  Context ctx{args, out, err};
  try {
    CLI::App app{"Near-field array sizing: beamdepth, near-field span, 3 dB beamspots and singular values"};
    app.require_subcommand(1);

    CommonOptions common;
    common.beta = default_beta();
    ApertureInput aperture;
    SizeOptions size_opts;
    BeamspotOptions beam_opts;
    SweepCliOptions sweep_opts;
    CurveOptions curve_opts;

    auto *metrics = app.add_subcommand("metrics", "Closed-form metrics for one configuration");
    add_common(*metrics, common);
    add_aperture(*metrics, aperture);

    auto *size = app.add_subcommand("size", "Minimum aperture meeting one or more requirements");
    add_common(*size, common);
    size->add_option("--eta", size_opts.eta, "Fraction of the asymptotic beamdepth resolution, in (0,1)");
    size->add_option("--min-span", size_opts.min_span, "Near-field span in wavelengths");
    size->add_option("--min-nbd", size_opts.min_nbd, "Number of 3 dB beamspots");
    size->add_option("--min-nsv", size_opts.min_nsv, "Number of significant singular values");

    auto *beamspots = app.add_subcommand("beamspots", "Pack 3 dB beamspots into the near-field region");
    add_common(*beamspots, common);
    add_aperture(*beamspots, aperture);
    beamspots->add_flag("--numeric-edges", beam_opts.numeric_edges, "Also locate edges on the exact array factor");
    beamspots->add_option("--spacing", beam_opts.spacing, "Element spacing for array-factor evaluation (wavelengths)")
        ->capture_default_str();
    beamspots->add_option("--emit-curves", beam_opts.emit_curves, "Write array-factor curves (CSV) to this file");
    beamspots->add_option("--samples", beam_opts.samples, "Distance samples for --emit-curves")->capture_default_str();

    auto *svsweep = app.add_subcommand("svsweep", "Significant singular values of the broadside channel");
    add_common(*svsweep, common);
    svsweep->add_option("--apertures", sweep_opts.apertures, "Ascending apertures in wavelengths")
        ->delimiter(',')
        ->required();
    svsweep->add_option("--threshold", sweep_opts.threshold, "Significance threshold in dB")->capture_default_str();
    svsweep->add_flag("--fit", sweep_opts.fit, "Fit kappa, gamma of the power law to the counts");
    svsweep->add_option("--spacing", sweep_opts.spacing, "Element spacing (wavelengths)")->capture_default_str();
    svsweep->add_option("--range-samples", sweep_opts.range_samples, "Range samples (0 = automatic)")
        ->capture_default_str();

    auto *curves = app.add_subcommand("curves", "Figure datasets as CSV");
    add_common(*curves, common, false);
    curves->add_option("--figure", curve_opts.figure, "beamdepth-vs-d, bdmin-vs-D, span-vs-D or nbd-vs-D")->required();
    curves->add_option("--geometries", curve_opts.geometries, "Geometries to include")->delimiter(',');
    curves->add_option("--apertures", curve_opts.apertures, "Apertures for beamdepth-vs-d")->delimiter(',');
    curves->add_option("--x-min", curve_opts.x_min, "Lower end of the abscissa");
    curves->add_option("--x-max", curve_opts.x_max, "Upper end of the abscissa");
    curves->add_option("--samples", curve_opts.samples, "Number of abscissa samples");

    std::vector<std::string> argv_storage{"nearfield"};
    argv_storage.insert(argv_storage.end(), args.begin(), args.end());
    std::vector<const char *> argv;
    for (const auto &a : argv_storage)
      argv.push_back(a.c_str());

    try {
      app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp &) {
      out << app.help();
      return kExitOk;
    } catch (const CLI::CallForAllHelp &) {
      out << app.help("", CLI::AppFormatMode::All);
      return kExitOk;
    } catch (const CLI::ParseError &e) {
      err << "usage error: " << e.what() << '\n';
      return kExitUsage;
    }

    if (*metrics)
      cmd_metrics(ctx, common, aperture);
    else if (*size)
      cmd_size(ctx, common, size_opts);
    else if (*beamspots)
      cmd_beamspots(ctx, common, aperture, beam_opts);
    else if (*svsweep)
      cmd_svsweep(ctx, common, sweep_opts);
    else if (*curves)
      cmd_curves(ctx, common, curve_opts);
  } catch (const UsageError &e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception &e) {
    ctx.fail(e.what());
  }
  return ctx.status;
}

} // namespace nearfield::cli
