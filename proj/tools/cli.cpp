#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "crc/capture.hpp"
#include "crc/estimators.hpp"
#include "crc/loglinear.hpp"
#include "crc/model_space.hpp"
#include "crc/oracle.hpp"
#include "crc/parallel.hpp"
#include "crc/simulation.hpp"
#include "crc/table_io.hpp"
#include "json.hpp"

namespace crc::cli {

namespace {

using Json = nlohmann::ordered_json;

// Every number leaves the tool with 10 significant digits, in CSV and JSON
// alike, so both emissions of a run carry identical values.
std::string num(double v) {
  if (std::isnan(v)) return "NA";
  if (std::isinf(v)) return v > 0 ? "Inf" : "-Inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string num(const std::optional<double>& v) { return v ? num(*v) : "NA"; }

std::string one_decimal(double v) {
  if (!std::isfinite(v)) return num(v);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", v);
  return buf;
}

Json jnum(double v) {
  if (!std::isfinite(v)) return nullptr;
  return std::strtod(num(v).c_str(), nullptr);
}

Json jnum(const std::optional<double>& v) { return v ? jnum(*v) : Json(nullptr); }

std::string join(const std::vector<std::string>& fields) {
  std::string line;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) line += ',';
    line += fields[i];
  }
  return line + "\n";
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(fnv1a64(buf.str())));
  return std::string("fnv1a64:") + hex;
}

std::string timestamp() {
  std::time_t t = std::time(nullptr);
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) {
    try {
      t = static_cast<std::time_t>(std::stoll(epoch));
    } catch (const std::exception&) {
    }
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Shared output options.
struct OutputOptions {
  std::string format = "csv";
  std::string output = "-";
  std::string manifest;
};

void add_output_options(CLI::App* cmd, OutputOptions& o) {
  cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("-o,--output", o.output, "Output file ('-' for stdout)");
  cmd->add_option("--manifest", o.manifest,
                  "Run manifest path (default: <output>.manifest.json when writing to a file)");
}

struct RunContext {
  std::ostream& out;
  std::ostream& err;
  std::vector<std::string> args;
};

class CommandError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void write_text(RunContext& ctx, const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    ctx.out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw CommandError("cannot write " + path);
  f << text;
}

Json make_manifest(const RunContext& ctx, const std::string& command, const std::string& input,
                   Json config) {
  Json m;
  m["command"] = command;
  m["argv"] = ctx.args;
  m["input_digest"] = input.empty() ? Json(nullptr) : Json(file_digest(input));
  m["config"] = std::move(config);
  m["tool_version"] = kToolVersion;
  m["timestamp"] = timestamp();
  return m;
}

void write_manifest(const OutputOptions& o, const Json& manifest) {
  std::string path = o.manifest;
  if (path.empty() && o.output != "-") path = o.output + ".manifest.json";
  if (path.empty()) return;
  std::ofstream f(path, std::ios::binary);
  if (!f) throw CommandError("cannot write manifest " + path);
  f << manifest.dump(2) << "\n";
}

FrequencyTable load_table(const std::string& path, int last_stream) {
  FrequencyTable table = read_table_file(path);
  if (last_stream != 0) {
    if (last_stream < 1 || last_stream > table.streams()) {
      throw CommandError("--last-stream must be in 1.." + std::to_string(table.streams()));
    }
    table = table.with_last_stream(last_stream);
  }
  return table;
}

std::vector<FitResult> fit_specs(const FrequencyTable& table, const std::vector<ModelSpec>& specs,
                                 const FitOptions& options) {
  std::vector<FitResult> fits;
  fits.reserve(specs.size());
  for (const auto& s : specs) fits.emplace_back(s);
  parallel_for(specs.size(), [&](std::size_t i) { fits[i] = fit_poisson(table, specs[i], options); });
  return fits;
}

std::vector<ModelSpec> model_space(int streams, bool conventions) {
  return conventions ? enumerate_conventional(streams) : enumerate_all(streams);
}

// ---------------------------------------------------------------- enumerate

struct EnumerateArgs {
  OutputOptions out;
  int streams = 0;
  bool conventions = false;
  bool count_only = false;
};

void cmd_enumerate(RunContext& ctx, const EnumerateArgs& a) {
  const auto specs = model_space(a.streams, a.conventions);
  const char* space = a.conventions ? "conventions" : "all";
  Json config{{"streams", a.streams}, {"space", space}, {"count_only", a.count_only}};
  const Json manifest = make_manifest(ctx, "enumerate", "", config);

  if (a.out.format == "json") {
    Json doc;
    doc["manifest"] = manifest;
    doc["streams"] = a.streams;
    doc["space"] = space;
    doc["count"] = specs.size();
    if (!a.count_only) {
      doc["models"] = Json::array();
      for (std::size_t i = 0; i < specs.size(); ++i) {
        doc["models"].push_back({{"model_id", i + 1},
                                 {"terms", specs[i].label()},
                                 {"p", specs[i].parameter_count()},
                                 {"hierarchical", is_hierarchical(specs[i])},
                                 {"saturated", specs[i].saturated()}});
      }
    }
    write_text(ctx, a.out.output, doc.dump(2) + "\n");
  } else if (a.count_only) {
    write_text(ctx, a.out.output,
               join({"streams", "space", "count"}) +
                   join({std::to_string(a.streams), space, std::to_string(specs.size())}));
  } else {
    std::string text = join({"model_id", "terms", "p", "hierarchical", "saturated"});
    for (std::size_t i = 0; i < specs.size(); ++i) {
      text += join({std::to_string(i + 1), specs[i].label(), std::to_string(specs[i].parameter_count()),
                    is_hierarchical(specs[i]) ? "1" : "0", specs[i].saturated() ? "1" : "0"});
    }
    write_text(ctx, a.out.output, text);
  }
  write_manifest(a.out, manifest);
}

// ------------------------------------------------------------------ fit-all

struct FitAllArgs {
  OutputOptions out;
  std::string table;
  bool conventions = false;
  bool oracle_check = false;
  std::string sort = "id";
  std::string bic_n = "cells";
  int last_stream = 0;
  double tie_tolerance = 1e-6;
};

void cmd_fit_all(RunContext& ctx, const FitAllArgs& a) {
  const FrequencyTable table = load_table(a.table, a.last_stream);
  const int k = table.streams();
  const auto specs = model_space(k, a.conventions);
  FitOptions options;
  options.bic_sample_size = a.bic_n == "captured" ? BicSampleSize::captured_cases : BicSampleSize::observed_cells;
  const auto fits = fit_specs(table, specs, options);

  const auto minimizers = aic_minimizers(fits, a.tie_tolerance);
  std::vector<bool> is_min(fits.size(), false);
  for (std::size_t i : minimizers) is_min[i] = true;

  std::vector<std::size_t> order(fits.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  if (a.sort == "aic") {
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
      const double ax = std::isfinite(fits[x].aic) ? fits[x].aic : INFINITY;
      const double ay = std::isfinite(fits[y].aic) ? fits[y].aic : INFINITY;
      return ax < ay;
    });
  }

  Json config{{"table", a.table},          {"streams", k},
              {"space", a.conventions ? "conventions" : "all"},
              {"oracle_check", a.oracle_check}, {"sort", a.sort},
              {"bic_n", a.bic_n},          {"last_stream", a.last_stream},
              {"tie_tolerance", a.tie_tolerance}};
  const Json manifest = make_manifest(ctx, "fit-all", a.table, config);

  const bool two = k == 2;
  auto oracle_text = [&](std::size_t i) -> std::optional<bool> {
    return a.oracle_check ? oracle::check_fit(table, fits[i]) : std::nullopt;
  };

  if (a.out.format == "json") {
    Json doc;
    doc["manifest"] = manifest;
    doc["streams"] = k;
    doc["n_captured"] = jnum(n_captured(table));
    doc["models"] = Json::array();
    for (std::size_t i : order) {
      const FitResult& f = fits[i];
      Json row{{"model_id", i + 1},
               {"terms", f.spec.label()},
               {"p", f.spec.parameter_count()},
               {"status", std::string(to_string(f.status))},
               {"loglik", jnum(f.loglik)},
               {"aic", jnum(f.aic)},
               {"aic_1dp", std::isfinite(f.aic) ? jnum(std::strtod(one_decimal(f.aic).c_str(), nullptr)) : Json(nullptr)},
               {"bic", jnum(f.bic)},
               {"n_hat", jnum(f.n_hat())},
               {"psi_hat", jnum(psi_hat(f))}};
      if (two) row["phi_hat"] = jnum(phi_hat(f));
      row["min_aic"] = static_cast<bool>(is_min[i]);
      if (a.oracle_check) {
        const auto ok = oracle_text(i);
        row["oracle_ok"] = ok ? Json(*ok) : Json(nullptr);
      }
      doc["models"].push_back(std::move(row));
    }
    doc["aic_minimizers"] = Json::array();
    for (std::size_t i : minimizers) doc["aic_minimizers"].push_back(i + 1);
    write_text(ctx, a.out.output, doc.dump(2) + "\n");
  } else {
    std::vector<std::string> header{"model_id", "terms", "p", "status", "loglik", "aic", "aic_1dp", "bic",
                                    "n_hat", "psi_hat"};
    if (two) header.push_back("phi_hat");
    header.push_back("min_aic");
    if (a.oracle_check) header.push_back("oracle_ok");
    std::string text = join(header);
    for (std::size_t i : order) {
      const FitResult& f = fits[i];
      std::vector<std::string> row{std::to_string(i + 1), f.spec.label(), std::to_string(f.spec.parameter_count()),
                                   std::string(to_string(f.status)), num(f.loglik), num(f.aic),
                                   one_decimal(f.aic), num(f.bic), num(f.n_hat()), num(psi_hat(f))};
      if (two) row.push_back(num(phi_hat(f)));
      row.push_back(is_min[i] ? "1" : "0");
      if (a.oracle_check) {
        const auto ok = oracle_text(i);
        row.push_back(ok ? (*ok ? "1" : "0") : "NA");
      }
      text += join(row);
    }
    write_text(ctx, a.out.output, text);
  }
  write_manifest(a.out, manifest);
}

// -------------------------------------------------------------------- curve

struct CurveArgs {
  OutputOptions out;
  std::string table;
  std::string param = "psi";
  std::optional<double> lo;
  std::optional<double> hi;
  std::optional<double> step;
  int points = 200;
  int last_stream = 0;
  bool conventions = false;
  bool no_overlay = false;
  std::string overlay_path;
  std::string refs_path;
};

void cmd_curve(RunContext& ctx, const CurveArgs& a) {
  const FrequencyTable table = load_table(a.table, a.last_stream);
  const KeyParam kind = a.param == "phi" ? KeyParam::phi : KeyParam::psi;
  if (kind == KeyParam::phi && table.streams() != 2) throw CommandError("--param phi needs a two-stream table");

  GridSpec spec{a.lo, a.hi, a.step, a.points};
  std::vector<double> grid;
  try {
    grid = make_grid(table, kind, spec);
  } catch (const std::invalid_argument& e) {
    throw CommandError(std::string(e.what()) + " (feasible " + a.param + " range for this table: " +
                       (kind == KeyParam::psi ? std::string("(0, 1]")
                                              : "[" + num(feasible_phi_lb(table)) + ", Inf)") +
                       ")");
  }

  std::vector<FitResult> fits;
  if (!a.no_overlay) fits = fit_specs(table, model_space(table.streams(), a.conventions), FitOptions{});
  const Curve c = curve(table, kind, grid, fits);
  const auto refs = reference_points(table);

  Json config{{"table", a.table},
              {"param", a.param},
              {"grid_lo", jnum(grid.front())},
              {"grid_hi", jnum(grid.back())},
              {"grid_points", grid.size()},
              {"step", jnum(a.step)},
              {"last_stream", a.last_stream},
              {"overlay_space", a.no_overlay ? "none" : (a.conventions ? "conventions" : "all")}};
  const Json manifest = make_manifest(ctx, "curve", a.table, config);

  const std::string key = a.param;
  if (a.out.format == "json") {
    Json doc;
    doc["manifest"] = manifest;
    doc["curve"] = Json::array();
    for (const auto& p : c.points) {
      doc["curve"].push_back({{key, jnum(p.value)},
                              {"n_hat", jnum(p.n_hat)},
                              {"variance", jnum(p.variance)},
                              {"ci_lo", jnum(p.ci_lo)},
                              {"ci_hi", jnum(p.ci_hi)}});
    }
    doc["overlay"] = Json::array();
    for (const auto& r : c.overlay) {
      doc["overlay"].push_back({{"model_id", r.model_id},
                                {"terms", r.terms},
                                {key + "_hat", jnum(r.key_hat)},
                                {"n_hat", jnum(r.n_hat)},
                                {"aic", jnum(r.aic)},
                                {"on_curve", r.on_curve}});
    }
    doc["references"] = Json::array();
    for (const auto& r : refs) {
      doc["references"].push_back({{"label", r.label}, {"psi", jnum(r.psi)}, {"n_hat", jnum(r.n_hat)}});
    }
    write_text(ctx, a.out.output, doc.dump(2) + "\n");
    write_manifest(a.out, manifest);
    return;
  }

  std::string curve_csv = join({key, "n_hat", "variance", "ci_lo", "ci_hi"});
  for (const auto& p : c.points) {
    curve_csv += join({num(p.value), num(p.n_hat), num(p.variance), num(p.ci_lo), num(p.ci_hi)});
  }
  std::string overlay_csv = join({"model_id", "terms", key + "_hat", "n_hat", "aic", "on_curve"});
  for (const auto& r : c.overlay) {
    overlay_csv += join({std::to_string(r.model_id), r.terms, num(r.key_hat), num(r.n_hat), num(r.aic),
                         r.on_curve ? "1" : "0"});
  }
  std::string refs_csv = join({"label", "psi", "n_hat"});
  for (const auto& r : refs) refs_csv += join({r.label, num(r.psi), num(r.n_hat)});

  if (a.out.output == "-") {
    std::string text = curve_csv;
    if (a.overlay_path.empty() && !a.no_overlay) text += "\n" + overlay_csv;
    write_text(ctx, "-", text);
  } else {
    write_text(ctx, a.out.output, curve_csv);
  }
  if (!a.overlay_path.empty()) write_text(ctx, a.overlay_path, overlay_csv);
  if (!a.refs_path.empty()) write_text(ctx, a.refs_path, refs_csv);
  write_manifest(a.out, manifest);
}

// ---------------------------------------------------------------------- mle

struct MleArgs {
  OutputOptions out;
  std::string table;
  std::optional<double> psi;
  std::optional<double> phi;
  int last_stream = 0;
};

void cmd_mle(RunContext& ctx, const MleArgs& a) {
  const FrequencyTable table = load_table(a.table, a.last_stream);
  if (a.psi.has_value() == a.phi.has_value()) throw CommandError("give exactly one of --psi or --phi");
  const KeyParam kind = a.psi ? KeyParam::psi : KeyParam::phi;
  const double value = a.psi ? *a.psi : *a.phi;
  if (kind == KeyParam::phi && table.streams() != 2) throw CommandError("--phi needs a two-stream table");
  CurvePoint p;
  try {
    p = curve_point(table, kind, value);
  } catch (const std::invalid_argument& e) {
    throw CommandError(e.what());
  }
  const std::string key = a.psi ? "psi" : "phi";
  Json config{{"table", a.table}, {"param", key}, {"value", value}, {"last_stream", a.last_stream}};
  const Json manifest = make_manifest(ctx, "mle", a.table, config);
  if (a.out.format == "json") {
    Json doc;
    doc["manifest"] = manifest;
    doc["param"] = key;
    doc["value"] = jnum(p.value);
    doc["n_hat"] = jnum(p.n_hat);
    doc["variance"] = jnum(p.variance);
    doc["ci_lo"] = jnum(p.ci_lo);
    doc["ci_hi"] = jnum(p.ci_hi);
    write_text(ctx, a.out.output, doc.dump(2) + "\n");
  } else {
    write_text(ctx, a.out.output,
               join({"param", "value", "n_hat", "variance", "ci_lo", "ci_hi"}) +
                   join({key, num(p.value), num(p.n_hat), num(p.variance), num(p.ci_lo), num(p.ci_hi)}));
  }
  write_manifest(a.out, manifest);
}

// ----------------------------------------------------------------- simulate

struct SimulateArgs {
  OutputOptions out;
  std::string scenario = "scenario1";
  int reps = 1000;
  std::uint64_t seed = 1;
  std::string space = "all";
  std::string ties = "fractional";
  double tie_tolerance = 1e-6;
  bool all_rows = false;
  bool emit_table = false;
  std::uint64_t replicate = 0;
};

ConditionalParams load_scenario(const std::string& name) {
  if (name == "scenario1") return ConditionalParams::scenario1();
  if (name == "scenario2") return ConditionalParams::scenario2();
  std::ifstream in(name, std::ios::binary);
  if (!in) throw CommandError("unknown scenario '" + name + "' (not a preset and not a readable file)");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return ConditionalParams::from_json(buf.str());
  } catch (const std::invalid_argument& e) {
    throw CommandError(e.what());
  }
}

void cmd_simulate(RunContext& ctx, const SimulateArgs& a) {
  const ConditionalParams params = load_scenario(a.scenario);
  const bool preset = a.scenario == "scenario1" || a.scenario == "scenario2";

  if (a.emit_table) {
    auto engine = substream(a.seed, a.replicate);
    const DrawnTable drawn = draw_table(params, engine);
    write_text(ctx, a.out.output, a.out.format == "json" ? table_to_json(drawn.table) : table_to_csv(drawn.table));
    Json config{{"scenario", a.scenario}, {"params", Json::parse(params.to_json())},
                {"seed", a.seed},         {"replicate", a.replicate},
                {"hidden_n000", drawn.hidden_n000}};
    write_manifest(a.out, make_manifest(ctx, "simulate", preset ? "" : a.scenario, config));
    return;
  }

  ScenarioOptions options;
  options.replicates = a.reps;
  options.seed = a.seed;
  options.space = a.space == "conventions" ? ModelSpace::conventions : ModelSpace::all;
  options.ties = a.ties == "strict" ? TiePolicy::strict : TiePolicy::fractional;
  options.tie_tolerance = a.tie_tolerance;
  const ScenarioResult result = run_scenario(params, options);

  Json config{{"scenario", a.scenario}, {"params", Json::parse(params.to_json())},
              {"reps", a.reps},         {"seed", a.seed},
              {"space", a.space},       {"ties", a.ties},
              {"tie_tolerance", a.tie_tolerance}};
  const Json manifest = make_manifest(ctx, "simulate", preset ? "" : a.scenario, config);

  if (a.out.format == "json") {
    Json doc;
    doc["manifest"] = manifest;
    doc["replicates"] = result.replicates;
    doc["seed"] = a.seed;
    doc["failed"] = jnum(result.failed);
    doc["unselected"] = jnum(result.unselected);
    doc["models"] = Json::array();
    for (std::size_t i = 0; i < result.models.size(); ++i) {
      const auto& m = result.models[i];
      if (!a.all_rows && m.selections == 0.0) continue;
      doc["models"].push_back({{"model_id", i + 1},
                               {"terms", m.spec.label()},
                               {"p", m.spec.parameter_count()},
                               {"selections", jnum(m.selections)},
                               {"mean_n_hat", jnum(m.mean_n_hat())},
                               {"converged_selections", jnum(m.converged_selections)},
                               {"mean_n_hat_any_status", jnum(m.mean_n_hat_any_status())}});
    }
    write_text(ctx, a.out.output, doc.dump(2) + "\n");
  } else {
    std::string text = join({"model_id", "terms", "p", "selections", "mean_n_hat", "converged_selections",
                             "mean_n_hat_any_status"});
    for (std::size_t i = 0; i < result.models.size(); ++i) {
      const auto& m = result.models[i];
      if (!a.all_rows && m.selections == 0.0) continue;
      text += join({std::to_string(i + 1), m.spec.label(), std::to_string(m.spec.parameter_count()),
                    num(m.selections), num(m.mean_n_hat()), num(m.converged_selections),
                    num(m.mean_n_hat_any_status())});
    }
    text += join({"failed", "", "", num(result.failed), "NA", "0", "NA"});
    write_text(ctx, a.out.output, text);
  }
  write_manifest(a.out, manifest);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Capture-recapture case-count estimation with log-linear models and psi/phi-indexed MLEs", "crc"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  EnumerateArgs en;
  auto* enumerate = app.add_subcommand("enumerate", "List identifiable log-linear models");
  add_output_options(enumerate, en.out);
  enumerate->add_option("-k,--streams", en.streams, "Number of streams")->required()->check(CLI::Range(2, 5));
  enumerate->add_flag("--conventions", en.conventions, "Only models satisfying the usual conventions");
  enumerate->add_flag("--count-only", en.count_only, "Print only the number of models");

  FitAllArgs fa;
  auto* fit_all = app.add_subcommand("fit-all", "Fit every model in the space to a table");
  add_output_options(fit_all, fa.out);
  fit_all->add_option("table", fa.table, "Table file (CSV or JSON)")->required();
  fit_all->add_flag("--conventions", fa.conventions, "Only models satisfying the usual conventions");
  fit_all->add_flag("--oracle-check", fa.oracle_check, "Compare against closed-form results");
  fit_all->add_option("--sort", fa.sort, "Row order")->check(CLI::IsMember({"id", "aic"}));
  fit_all->add_option("--bic-n", fa.bic_n, "BIC sample size")->check(CLI::IsMember({"cells", "captured"}));
  fit_all->add_option("--last-stream", fa.last_stream, "Stream (1-based) to treat as the last stream");
  fit_all->add_option("--tie-tolerance", fa.tie_tolerance, "AIC gap treated as a tie");

  CurveArgs cu;
  auto* curve_cmd = app.add_subcommand("curve", "Sample the conditional-MLE curve and overlay model fits");
  add_output_options(curve_cmd, cu.out);
  curve_cmd->add_option("table", cu.table, "Table file (CSV or JSON)")->required();
  curve_cmd->add_option("--param", cu.param, "Key parameter")->check(CLI::IsMember({"psi", "phi"}));
  curve_cmd->add_option("--lo", cu.lo, "Grid lower bound");
  curve_cmd->add_option("--hi", cu.hi, "Grid upper bound");
  curve_cmd->add_option("--step", cu.step, "Grid step (default: --points uniform points)");
  curve_cmd->add_option("--points", cu.points, "Number of grid points when no step is given");
  curve_cmd->add_option("--last-stream", cu.last_stream, "Stream (1-based) to treat as the last stream");
  curve_cmd->add_flag("--conventions", cu.conventions, "Overlay only conventional models");
  curve_cmd->add_flag("--no-overlay", cu.no_overlay, "Skip fitting log-linear models");
  curve_cmd->add_option("--overlay", cu.overlay_path, "Overlay CSV path");
  curve_cmd->add_option("--refs", cu.refs_path, "Reference-assumption CSV path");

  MleArgs ml;
  auto* mle = app.add_subcommand("mle", "Conditional MLE of N for an assumed psi or phi");
  add_output_options(mle, ml.out);
  mle->add_option("table", ml.table, "Table file (CSV or JSON)")->required();
  auto* psi_opt = mle->add_option("--psi", ml.psi, "Assumed psi");
  auto* phi_opt = mle->add_option("--phi", ml.phi, "Assumed phi (two streams)");
  psi_opt->excludes(phi_opt);
  mle->add_option("--last-stream", ml.last_stream, "Stream (1-based) to treat as the last stream");

  SimulateArgs si;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo study of AIC-based model selection");
  add_output_options(simulate, si.out);
  simulate->add_option("--scenario", si.scenario, "Preset (scenario1, scenario2) or JSON file");
  simulate->add_option("--reps", si.reps, "Replicates")->check(CLI::PositiveNumber);
  simulate->add_option("--seed", si.seed, "Seed");
  simulate->add_option("--space", si.space, "Model space")->check(CLI::IsMember({"all", "conventions"}));
  simulate->add_option("--ties", si.ties, "AIC tie policy")->check(CLI::IsMember({"fractional", "strict"}));
  simulate->add_option("--tie-tolerance", si.tie_tolerance, "AIC gap treated as a tie");
  simulate->add_flag("--all-rows", si.all_rows, "Also list models that were never selected");
  simulate->add_flag("--emit-table", si.emit_table, "Write one drawn table instead of running the study");
  simulate->add_option("--replicate", si.replicate, "Replicate index used by --emit-table");

  std::vector<std::string> argv_store{"crc"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  RunContext ctx{out, err, args};
  try {
    if (*enumerate) cmd_enumerate(ctx, en);
    if (*fit_all) cmd_fit_all(ctx, fa);
    if (*curve_cmd) cmd_curve(ctx, cu);
    if (*mle) cmd_mle(ctx, ml);
    if (*simulate) cmd_simulate(ctx, si);
  } catch (const std::exception& e) {
    err << "crc: error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace crc::cli
