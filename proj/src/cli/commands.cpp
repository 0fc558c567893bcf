#include "infoflow/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "infoflow/error.hpp"

namespace infoflow::cli {
namespace {

constexpr const char* kUnits = "rates and frequencies in units of lambda, times in units of 1/lambda";

void check_finite(const Json& j, const std::string& where) {
  if (j.is_number_float() && !std::isfinite(j.get<double>())) {
    throw Error(Errc::NonFinite, "non-finite number in output at " + (where.empty() ? "/" : where));
  }
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) check_finite(v, where + "/" + k);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) check_finite(j[i], where + "/" + std::to_string(i));
  }
}

Json intervals_json(const std::vector<GrowthInterval>& intervals) {
  Json out = Json::array();
  for (const auto& gi : intervals) out.push_back({{"a", gi.a}, {"b", gi.b}, {"contribution", gi.contribution}});
  return out;
}

Json grid_json(const RunConfig& cfg) { return {{"t_max", cfg.t_max}, {"n_steps", cfg.n_steps}}; }

Json document_base(const RunConfig& cfg) {
  return {{"config", cfg.resolved},
          {"grid", grid_json(cfg)},
          {"model", to_string(cfg.model)},
          {"params", model_params(cfg)},
          {"units", kUnits},
          {"version", kFormatVersion}};
}

const StatePair& require_pair(const RunConfig& cfg) {
  if (!cfg.pair) throw ConfigError("pair: trajectory needs pair.rho1 and pair.rho2");
  return *cfg.pair;
}

std::vector<std::string> candidate_names(const RunConfig& cfg) {
  std::vector<std::string> names;
  if (!cfg.use_candidates) return names;
  for (const auto& c : model_candidates(cfg.model)) names.push_back(c.name);
  return names;
}

void write_text(const std::string& text, const std::optional<std::string>& path, std::ostream& out) {
  if (!path) {
    out << text;
    out.flush();
    if (!out) throw IoError("failed writing to standard output");
    return;
  }
  std::ofstream file(*path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open output file " + *path);
  file << text;
  file.close();
  if (!file) throw IoError("failed writing output file " + *path);
}

OutputFormat parse_format(const std::string& s) {
  if (s == "csv") return OutputFormat::Csv;
  if (s == "json") return OutputFormat::Json;
  throw ConfigError("--format: expected csv or json, got '" + s + "'");
}

}  // namespace

std::string dump_json(const Json& doc) {
  check_finite(doc, "");
  return doc.dump(2) + "\n";
}

std::vector<std::string> csv_metadata(const RunConfig& cfg) {
  return {std::string("format ") + kFormatVersion, std::string("units ") + kUnits, "config " + cfg.resolved.dump()};
}

CsvTable trajectory_table(const RunConfig& cfg) {
  const StatePair& pair = require_pair(cfg);
  const TimeGrid grid = build_grid(cfg);
  const DistanceTrajectory traj = distance_trajectory(build_family(cfg), pair, grid);
  std::vector<int> flag(grid.size(), 0);
  for (const auto& gi : growth_intervals(traj, cfg.sampler.eps)) {
    for (std::size_t k = gi.k_begin; k < gi.k_end; ++k) flag[k] = 1;
  }
  CsvTable table{csv_metadata(cfg), {"t", "D", "sigma", "growth_flag"}, {}};
  table.rows.reserve(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    table.rows.push_back({format_double(grid.time(k)), format_double(traj.d_values[k]),
                          format_double(traj.sigma_values[k]), std::to_string(flag[k])});
  }
  return table;
}

Json trajectory_document(const RunConfig& cfg) {
  const CsvTable table = trajectory_table(cfg);
  Json doc = document_base(cfg);
  Json t = Json::array(), d = Json::array(), sigma = Json::array(), flag = Json::array();
  for (const auto& row : table.rows) {
    t.push_back(parse_double(row[0]));
    d.push_back(parse_double(row[1]));
    sigma.push_back(parse_double(row[2]));
    flag.push_back(std::stoi(row[3]));
  }
  doc["t"] = t;
  doc["D"] = d;
  doc["sigma"] = sigma;
  doc["growth_flag"] = flag;
  return doc;
}

MeasureResult run_measure(const RunConfig& cfg, std::size_t threads) {
  SamplerConfig sampler = cfg.sampler;
  sampler.threads = std::max<std::size_t>(1, threads);
  return maximize_measure(build_family(cfg), build_grid(cfg), sampler);
}

Json measure_document(const RunConfig& cfg, std::size_t threads) {
  const MeasureResult r = run_measure(cfg, threads);
  const auto names = candidate_names(cfg);
  Json doc = document_base(cfg);
  doc["N"] = r.value;
  doc["best_pair"] = {{"rho1", state_to_json(r.pair.rho1)}, {"rho2", state_to_json(r.pair.rho2)}};
  doc["best_candidate"] = r.best_candidate ? Json(names.at(*r.best_candidate)) : Json();
  Json cands = Json::array();
  for (std::size_t i = 0; i < r.candidate_values.size(); ++i) {
    cands.push_back({{"name", names.at(i)}, {"N", r.candidate_values[i]}});
  }
  doc["candidates"] = cands;
  doc["intervals"] = intervals_json(r.intervals);
  doc["n_samples"] = r.samples_evaluated;
  doc["seed"] = r.seed;
  doc["converged"] = r.converged;
  return doc;
}

CsvTable measure_table(const RunConfig& cfg, std::size_t threads) {
  const MeasureResult r = run_measure(cfg, threads);
  CsvTable table{csv_metadata(cfg), {"a", "b", "contribution"}, {}};
  table.metadata.push_back("N " + format_double(r.value));
  table.metadata.push_back(std::string("converged ") + (r.converged ? "true" : "false"));
  for (const auto& gi : r.intervals) {
    table.rows.push_back({format_double(gi.a), format_double(gi.b), format_double(gi.contribution)});
  }
  return table;
}

CsvTable sweep_table(const RunConfig& cfg, std::size_t threads, std::ostream* progress) {
  if (!cfg.sweep) throw ConfigError("sweep: section missing (needs parameter and values or start/stop/count)");
  const SweepSpec& spec = *cfg.sweep;
  const auto names = candidate_names(cfg);

  CsvTable table{csv_metadata(cfg), {"sweep_value", "N_best"}, {}};
  std::string legend = "candidates";
  for (std::size_t i = 0; i < names.size(); ++i) {
    table.header.push_back("N_candidate_" + std::to_string(i + 1));
    legend += " " + std::to_string(i + 1) + "=" + names[i];
  }
  table.metadata.push_back("sweep " + spec.parameter);
  if (!names.empty()) table.metadata.push_back(legend);

  for (std::size_t p = 0; p < spec.values.size(); ++p) {
    const double value = spec.values[p];
    std::vector<std::string> row(table.header.size());
    row[0] = format_double(value);
    try {
      const RunConfig point = with_parameter(cfg, spec.parameter, value);
      const MeasureResult r = run_measure(point, threads);
      row[1] = format_double(r.value);
      for (std::size_t i = 0; i < r.candidate_values.size(); ++i) row[2 + i] = format_double(r.candidate_values[i]);
    } catch (const std::exception& e) {
      if (progress) *progress << "warning: " << spec.parameter << " = " << row[0] << " failed: " << e.what() << "\n";
    }
    if (progress) {
      *progress << "sweep " << (p + 1) << "/" << spec.values.size() << " " << spec.parameter << " = " << row[0]
                << "\n";
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

Json sweep_document(const CsvTable& table, const RunConfig& cfg) {
  Json doc = document_base(cfg);
  doc["columns"] = table.header;
  Json rows = Json::array();
  for (const auto& row : table.rows) {
    Json r = Json::array();
    for (const auto& cell : row) r.push_back(cell.empty() ? Json() : Json(parse_double(cell)));
    rows.push_back(r);
  }
  doc["rows"] = rows;
  doc["sweep_parameter"] = cfg.sweep ? cfg.sweep->parameter : "";
  return doc;
}

Json validate_document(const RunConfig& cfg) {
  Json doc = document_base(cfg);
  doc["valid"] = true;
  return doc;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Trace-distance non-Markovianity of open-system dynamical maps", "infoflow"};
  app.set_version_flag("--version", std::string(INFOFLOW_VERSION));
  app.require_subcommand(1);

  std::optional<std::string> config_path;
  std::vector<std::string> overrides;
  std::optional<std::string> out_path;
  std::optional<std::string> format;
  std::optional<std::uint64_t> seed;
  std::size_t threads = 1;
  bool quiet = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON run configuration");
    sub->add_option("--set", overrides, "override a config value, e.g. model.gamma0=5")->take_all();
    sub->add_option("--out", out_path, "output file (default: standard output)");
    sub->add_option("--format", format, "csv or json");
    sub->add_option("--seed", seed, "sampler seed");
    sub->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    sub->add_flag("--quiet", quiet, "no progress messages");
  };
  auto* trajectory = app.add_subcommand("trajectory", "D(t) and sigma(t) for one state pair");
  auto* measure = app.add_subcommand("measure", "maximize the measure over sampled and candidate pairs");
  auto* sweep = app.add_subcommand("sweep", "the measure along one model parameter");
  auto* validate_cmd = app.add_subcommand("validate-config", "resolve and check a configuration");
  for (auto* sub : {trajectory, measure, sweep, validate_cmd}) add_common(sub);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, e2;
    const int code = app.exit(e, o, e2);
    out << o.str();
    err << e2.str();
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    const RunConfig cfg = load_config(config_path, overrides, seed);
    std::optional<OutputFormat> chosen;
    if (format) chosen = parse_format(*format);
    else if (cfg.resolved.contains("output") && cfg.resolved["output"].contains("format")) {
      chosen = parse_format(cfg.resolved["output"]["format"].get<std::string>());
    }

    std::string text;
    if (trajectory->parsed()) {
      text = chosen.value_or(OutputFormat::Csv) == OutputFormat::Csv ? to_csv(trajectory_table(cfg))
                                                                     : dump_json(trajectory_document(cfg));
    } else if (measure->parsed()) {
      text = chosen.value_or(OutputFormat::Json) == OutputFormat::Json ? dump_json(measure_document(cfg, threads))
                                                                       : to_csv(measure_table(cfg, threads));
    } else if (sweep->parsed()) {
      const CsvTable table = sweep_table(cfg, threads, quiet ? nullptr : &err);
      text = chosen.value_or(OutputFormat::Csv) == OutputFormat::Csv ? to_csv(table)
                                                                     : dump_json(sweep_document(table, cfg));
    } else {
      text = dump_json(validate_document(cfg));
    }
    write_text(text, out_path, out);
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const Error& e) {
    const bool numerical = is_numerical_failure(e.code()) || e.code() == Errc::NonFinite;
    err << (numerical ? "numerical failure: " : "config error: ") << e.what() << "\n";
    return numerical ? kExitNumerical : kExitConfig;
  } catch (const std::domain_error& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
}

}  // namespace infoflow::cli
