#include "infoflow/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "infoflow/error.hpp"

namespace infoflow::cli {
namespace {

const std::map<std::string, std::set<std::string>>& allowed_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"model", {"name", "gamma0", "lambda", "delta1", "delta2", "omega_cav", "omega"}},
      {"grid", {"t_max", "n_steps"}},
      {"sampler", {"n_pairs", "pure_fraction", "seed", "use_candidates"}},
      {"measure", {"eps"}},
      {"quadrature",
       {"extended_line", "omega_cutoff", "max_panel_width", "max_panel_phase", "s_step", "rel_tol", "max_doublings"}},
      {"pair", {"rho1", "rho2"}},
      {"sweep", {"parameter", "values", "start", "stop", "count"}},
      {"output", {"format"}},
  };
  return keys;
}

const std::set<std::string>& model_keys(ModelKind kind) {
  static const std::set<std::string> jc = {"name", "gamma0", "lambda"};
  static const std::set<std::string> dephasing = {"name", "omega"};
  static const std::set<std::string> lambda = {"name", "gamma0", "lambda", "delta1", "delta2", "omega_cav"};
  switch (kind) {
    case ModelKind::JC: return jc;
    case ModelKind::Dephasing: return dephasing;
    case ModelKind::Lambda: return lambda;
  }
  return jc;
}

ModelKind parse_model_name(const std::string& name) {
  if (name == "jc") return ModelKind::JC;
  if (name == "dephasing") return ModelKind::Dephasing;
  if (name == "lambda") return ModelKind::Lambda;
  throw ConfigError("model.name: unknown model '" + name + "' (expected jc, dephasing or lambda)");
}

std::string type_name(const Json& v) { return v.type_name(); }

const Json& field(const Json& doc, const std::string& section, const std::string& key) {
  const auto s = doc.find(section);
  if (s == doc.end() || !s->contains(key)) throw ConfigError(section + "." + key + ": missing");
  return (*s)[key];
}

double number(const Json& doc, const std::string& section, const std::string& key) {
  const Json& v = field(doc, section, key);
  if (!v.is_number()) throw ConfigError(section + "." + key + ": expected a number, got " + type_name(v));
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(section + "." + key + ": must be finite");
  return x;
}

double positive(const Json& doc, const std::string& section, const std::string& key) {
  const double x = number(doc, section, key);
  if (!(x > 0.0)) throw ConfigError(section + "." + key + ": must be positive, got " + Json(x).dump());
  return x;
}

std::uint64_t integer(const Json& doc, const std::string& section, const std::string& key) {
  const Json& v = field(doc, section, key);
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer()) {
    if (v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
    throw ConfigError(section + "." + key + ": must be non-negative, got " + v.dump());
  }
  throw ConfigError(section + "." + key + ": expected a non-negative integer, got " + type_name(v));
}

bool boolean(const Json& doc, const std::string& section, const std::string& key) {
  const Json& v = field(doc, section, key);
  if (!v.is_boolean()) throw ConfigError(section + "." + key + ": expected true or false, got " + type_name(v));
  return v.get<bool>();
}

void check_keys(const Json& doc) {
  if (!doc.is_object()) throw ConfigError("config: top level must be an object");
  for (const auto& [section, body] : doc.items()) {
    const auto it = allowed_keys().find(section);
    if (it == allowed_keys().end()) throw ConfigError(section + ": unknown section");
    if (!body.is_object()) throw ConfigError(section + ": expected an object, got " + type_name(body));
    for (const auto& [key, value] : body.items()) {
      if (!it->second.count(key)) throw ConfigError(section + "." + key + ": unknown key");
    }
  }
}

// Overlays `top` onto `base`, section by section.
void overlay(Json& base, const Json& top) {
  for (const auto& [section, body] : top.items()) {
    for (const auto& [key, value] : body.items()) base[section][key] = value;
  }
}

Json defaults_for(ModelKind kind) {
  Json d;
  d["sampler"] = {{"n_pairs", 1000}, {"pure_fraction", 0.5}, {"seed", 20100106u}, {"use_candidates", true}};
  d["measure"] = {{"eps", kDefaultGrowthEps}};
  switch (kind) {
    case ModelKind::JC:
      d["model"] = {{"name", "jc"}, {"gamma0", 5.0}, {"lambda", 1.0}};
      d["grid"] = {{"t_max", 20.0}, {"n_steps", 4000}};
      d["pair"] = {{"rho1", "ground"}, {"rho2", "plus_x"}};
      break;
    case ModelKind::Dephasing:
      d["model"] = {{"name", "dephasing"}, {"omega", 1.0}};
      d["grid"] = {{"n_steps", 4000}};  // t_max set from omega in resolve()
      d["pair"] = {{"rho1", "plus_x"}, {"rho2", "minus_x"}};
      break;
    case ModelKind::Lambda: {
      const models::QuadratureConfig q;
      d["model"] = {{"name", "lambda"}, {"gamma0", 0.01}, {"lambda", 1.0}, {"delta1", 6.0}, {"delta2", 5.0},
                    {"omega_cav", 50.0}};
      d["grid"] = {{"t_max", 30.0}, {"n_steps", 6000}};
      d["quadrature"] = {{"extended_line", q.extended_line}, {"omega_cutoff", q.omega_cutoff},
                         {"max_panel_width", q.max_panel_width}, {"max_panel_phase", q.max_panel_phase},
                         {"s_step", q.s_step},   {"rel_tol", q.rel_tol},
                         {"max_doublings", q.max_doublings}};
      d["pair"] = {{"rho1", "a"}, {"rho2", "b"}};
      break;
    }
  }
  return d;
}

DensityMatrix must_validate(const ComplexMatrix& m, const std::string& field) {
  try {
    return validate_density(m);
  } catch (const Error& e) {
    throw ConfigError(field + ": not a valid density matrix (" + e.what() + ")");
  }
}

DensityMatrix named_state(const std::string& name, Index dim, const std::string& field) {
  const double r = 1.0 / std::numbers::sqrt2;
  const Complex i(0.0, 1.0);
  if (name == "mixed") return maximally_mixed(dim);
  if (dim == 2) {
    if (name == "excited") return basis_state(2, 0);
    if (name == "ground") return basis_state(2, 1);
    ComplexVector psi(2);
    if (name == "plus_x") psi << r, r;
    else if (name == "minus_x") psi << r, -r;
    else if (name == "plus_y") psi << r, i * r;
    else if (name == "minus_y") psi << r, -i * r;
    else throw ConfigError(field + ": unknown qubit state '" + name + "'");
    return pure_state(psi);
  }
  if (dim == 3) {
    if (name == "a") return basis_state(3, 0);
    if (name == "b") return basis_state(3, 1);
    if (name == "c") return basis_state(3, 2);
    throw ConfigError(field + ": unknown three-level state '" + name + "' (expected a, b, c or mixed)");
  }
  throw ConfigError(field + ": named states exist only for dimensions 2 and 3");
}

std::vector<double> sweep_values(const Json& s) {
  std::vector<double> out;
  if (s.contains("values")) {
    if (s.contains("start") || s.contains("stop") || s.contains("count")) {
      throw ConfigError("sweep: give either values or start/stop/count, not both");
    }
    const Json& v = s["values"];
    if (!v.is_array() || v.empty()) throw ConfigError("sweep.values: expected a nonempty array of numbers");
    for (const Json& x : v) {
      if (!x.is_number() || !std::isfinite(x.get<double>())) throw ConfigError("sweep.values: entries must be numbers");
      out.push_back(x.get<double>());
    }
    return out;
  }
  Json wrapper = {{"sweep", s}};
  const double start = number(wrapper, "sweep", "start");
  const double stop = number(wrapper, "sweep", "stop");
  const std::uint64_t count = integer(wrapper, "sweep", "count");
  if (count < 1) throw ConfigError("sweep.count: must be at least 1");
  if (count == 1) return {start};
  for (std::uint64_t k = 0; k < count; ++k) {
    const double f = static_cast<double>(k) / static_cast<double>(count - 1);
    out.push_back(k + 1 == count ? stop : start + f * (stop - start));
  }
  return out;
}

}  // namespace

const char* to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::JC: return "jc";
    case ModelKind::Dephasing: return "dephasing";
    case ModelKind::Lambda: return "lambda";
  }
  return "?";
}

Json parse_config_text(const std::string& text, const std::string& origin) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1;
    std::size_t column = 1;
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t k = 0; k < end; ++k) {
      if (text[k] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::string what = e.what();
    const auto colon = what.find("error: ");
    if (colon != std::string::npos) what = what.substr(colon + 7);
    throw ConfigError(origin + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + what);
  }
}

Json read_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

void apply_override(Json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("--set " + assignment + ": expected key=value");
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);

  std::vector<std::string> path;
  std::stringstream ss(key);
  for (std::string part; std::getline(ss, part, '.');) {
    if (part.empty()) throw ConfigError("--set " + key + ": empty path component");
    path.push_back(part);
  }
  if (key.back() == '.') throw ConfigError("--set " + key + ": empty path component");

  Json value = Json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;

  Json* node = &doc;
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    if (!node->is_object()) throw ConfigError("--set " + key + ": " + path[k] + " has a non-object parent");
    node = &(*node)[path[k]];
    if (node->is_null()) *node = Json::object();
  }
  if (!node->is_object()) throw ConfigError("--set " + key + ": parent is not an object");
  (*node)[path.back()] = std::move(value);
}

Json resolve(const Json& doc) {
  check_keys(doc);
  ModelKind kind = ModelKind::JC;
  if (doc.contains("model") && doc["model"].contains("name")) {
    const Json& name = doc["model"]["name"];
    if (!name.is_string()) throw ConfigError("model.name: expected a string, got " + type_name(name));
    kind = parse_model_name(name.get<std::string>());
  }
  if (doc.contains("model")) {
    for (const auto& [key, value] : doc["model"].items()) {
      if (!model_keys(kind).count(key)) {
        throw ConfigError("model." + key + ": not a parameter of the " + std::string(to_string(kind)) + " model");
      }
    }
  }
  if (kind != ModelKind::Lambda && doc.contains("quadrature")) {
    throw ConfigError("quadrature: only used by the lambda model");
  }
  Json out = defaults_for(kind);
  overlay(out, doc);
  if (kind == ModelKind::Dephasing && !out["grid"].contains("t_max")) {
    const double omega = positive(out, "model", "omega");
    out["grid"]["t_max"] = 5.0 * std::numbers::pi / omega;
  }
  return out;
}

RunConfig interpret(const Json& resolved) {
  RunConfig cfg;
  cfg.resolved = resolved;
  const Json& name = field(resolved, "model", "name");
  if (!name.is_string()) throw ConfigError("model.name: expected a string");
  cfg.model = parse_model_name(name.get<std::string>());

  switch (cfg.model) {
    case ModelKind::JC:
      cfg.jc = {positive(resolved, "model", "gamma0"), positive(resolved, "model", "lambda")};
      break;
    case ModelKind::Dephasing:
      cfg.dephasing = {positive(resolved, "model", "omega")};
      break;
    case ModelKind::Lambda: {
      cfg.lambda = {positive(resolved, "model", "gamma0"), positive(resolved, "model", "lambda"),
                    number(resolved, "model", "delta1"), number(resolved, "model", "delta2"),
                    positive(resolved, "model", "omega_cav")};
      auto& q = cfg.quadrature;
      q.extended_line = boolean(resolved, "quadrature", "extended_line");
      q.omega_cutoff = positive(resolved, "quadrature", "omega_cutoff");
      q.max_panel_width = positive(resolved, "quadrature", "max_panel_width");
      q.max_panel_phase = positive(resolved, "quadrature", "max_panel_phase");
      q.s_step = positive(resolved, "quadrature", "s_step");
      q.rel_tol = positive(resolved, "quadrature", "rel_tol");
      q.max_doublings = static_cast<int>(integer(resolved, "quadrature", "max_doublings"));
      break;
    }
  }

  cfg.t_max = positive(resolved, "grid", "t_max");
  const std::uint64_t n_steps = integer(resolved, "grid", "n_steps");
  if (n_steps < 2) throw ConfigError("grid.n_steps: must be at least 2");
  cfg.n_steps = static_cast<std::size_t>(n_steps);

  cfg.sampler.n_pairs = static_cast<std::size_t>(integer(resolved, "sampler", "n_pairs"));
  cfg.sampler.pure_fraction = number(resolved, "sampler", "pure_fraction");
  if (cfg.sampler.pure_fraction < 0.0 || cfg.sampler.pure_fraction > 1.0) {
    throw ConfigError("sampler.pure_fraction: must lie in [0, 1]");
  }
  cfg.sampler.seed = integer(resolved, "sampler", "seed");
  cfg.use_candidates = boolean(resolved, "sampler", "use_candidates");
  cfg.sampler.eps = number(resolved, "measure", "eps");
  if (cfg.sampler.eps < 0.0) throw ConfigError("measure.eps: must be >= 0");

  const Index dim = model_dim(cfg.model);
  if (resolved.contains("pair")) {
    const Json& p = resolved["pair"];
    if (!p.contains("rho1") || !p.contains("rho2")) throw ConfigError("pair: needs both rho1 and rho2");
    cfg.pair = StatePair{parse_state(p["rho1"], dim, "pair.rho1"), parse_state(p["rho2"], dim, "pair.rho2")};
  }
  if (cfg.use_candidates) {
    for (auto& c : model_candidates(cfg.model)) cfg.sampler.candidates.push_back(c.pair);
  }
  if (cfg.sampler.n_pairs == 0 && cfg.sampler.candidates.empty()) {
    throw ConfigError("sampler: n_pairs is 0 and candidates are disabled");
  }

  if (resolved.contains("sweep")) {
    const Json& s = resolved["sweep"];
    if (!s.contains("parameter") || !s["parameter"].is_string()) {
      throw ConfigError("sweep.parameter: expected a model parameter name");
    }
    std::string param = s["parameter"].get<std::string>();
    if (param.rfind("model.", 0) == 0) param = param.substr(6);
    if (param == "name" || !model_keys(cfg.model).count(param)) {
      throw ConfigError("sweep.parameter: '" + param + "' is not a parameter of the " + to_string(cfg.model) +
                        " model");
    }
    cfg.sweep = SweepSpec{param, sweep_values(s)};
  }

  if (resolved.contains("output") && resolved["output"].contains("format")) {
    const Json& f = resolved["output"]["format"];
    if (!f.is_string() || (f != "csv" && f != "json")) throw ConfigError("output.format: expected csv or json");
  }

  try {
    switch (cfg.model) {
      case ModelKind::JC: models::validate(cfg.jc); break;
      case ModelKind::Dephasing: models::validate(cfg.dephasing); break;
      case ModelKind::Lambda:
        models::validate(cfg.lambda);
        models::validate(cfg.quadrature);
        break;
    }
  } catch (const Error& e) {
    throw ConfigError(std::string("model: ") + e.what());
  }
  return cfg;
}

RunConfig load_config(const std::optional<std::string>& path, const std::vector<std::string>& overrides,
                      std::optional<std::uint64_t> seed) {
  Json doc = path ? read_config_file(*path) : Json::object();
  if (!doc.is_object()) throw ConfigError("config: top level must be an object");
  for (const auto& o : overrides) apply_override(doc, o);
  if (seed) doc["sampler"]["seed"] = *seed;
  return interpret(resolve(doc));
}

DensityMatrix parse_state(const Json& spec, Index dim, const std::string& field) {
  if (spec.is_string()) return named_state(spec.get<std::string>(), dim, field);
  if (!spec.is_object()) throw ConfigError(field + ": expected a state name or object");
  if (spec.contains("bloch")) {
    const Json& b = spec["bloch"];
    if (dim != 2) throw ConfigError(field + ": Bloch vectors describe qubits only");
    if (!b.is_array() || b.size() != 3 || !b[0].is_number() || !b[1].is_number() || !b[2].is_number()) {
      throw ConfigError(field + ".bloch: expected three numbers");
    }
    const double x = b[0].get<double>(), y = b[1].get<double>(), z = b[2].get<double>();
    ComplexMatrix m(2, 2);
    m << 0.5 * (1.0 + z), Complex(0.5 * x, -0.5 * y), Complex(0.5 * x, 0.5 * y), 0.5 * (1.0 - z);
    return must_validate(m, field);
  }
  if (spec.contains("re")) {
    const Json& re = spec["re"];
    const Json im = spec.contains("im") ? spec["im"] : Json();
    ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
    auto read = [&](const Json& rows, bool imaginary) {
      const std::string part = field + (imaginary ? ".im" : ".re");
      if (!rows.is_array() || rows.size() != static_cast<std::size_t>(dim)) {
        throw ConfigError(part + ": expected " + std::to_string(dim) + " rows");
      }
      for (Index i = 0; i < dim; ++i) {
        const Json& row = rows[static_cast<std::size_t>(i)];
        if (!row.is_array() || row.size() != static_cast<std::size_t>(dim)) {
          throw ConfigError(part + ": expected " + std::to_string(dim) + " columns in row " + std::to_string(i));
        }
        for (Index j = 0; j < dim; ++j) {
          const Json& x = row[static_cast<std::size_t>(j)];
          if (!x.is_number()) throw ConfigError(part + ": entries must be numbers");
          if (imaginary) m(i, j) += Complex(0.0, x.get<double>());
          else m(i, j) += x.get<double>();
        }
      }
    };
    read(re, false);
    if (!im.is_null()) read(im, true);
    return must_validate(m, field);
  }
  throw ConfigError(field + ": expected a name, {\"bloch\": [...]} or {\"re\": ..., \"im\": ...}");
}

Json state_to_json(const DensityMatrix& rho) {
  Json re = Json::array();
  Json im = Json::array();
  for (Index i = 0; i < rho.dim(); ++i) {
    Json rr = Json::array();
    Json ri = Json::array();
    for (Index j = 0; j < rho.dim(); ++j) {
      rr.push_back(rho(i, j).real());
      ri.push_back(rho(i, j).imag());
    }
    re.push_back(rr);
    im.push_back(ri);
  }
  return {{"re", re}, {"im", im}};
}

Index model_dim(ModelKind kind) { return kind == ModelKind::Lambda ? 3 : 2; }

MapFamily build_family(const RunConfig& cfg) {
  switch (cfg.model) {
    case ModelKind::JC: return models::jc_family(cfg.jc, cfg.t_max);
    case ModelKind::Dephasing: return models::dephasing_family(cfg.dephasing, cfg.t_max);
    case ModelKind::Lambda: return models::lambda_family(cfg.lambda, cfg.quadrature, build_grid(cfg));
  }
  throw ConfigError("model: unknown");
}

TimeGrid build_grid(const RunConfig& cfg) { return TimeGrid(cfg.t_max, cfg.n_steps); }

std::vector<NamedPair> model_candidates(ModelKind kind) {
  const Index dim = model_dim(kind);
  auto pair = [&](const char* name, const char* r1, const char* r2) {
    return NamedPair{name, {named_state(r1, dim, name), named_state(r2, dim, name)}};
  };
  switch (kind) {
    case ModelKind::JC: return {pair("ground_plus_x", "ground", "plus_x")};
    case ModelKind::Dephasing: return {pair("plus_x_minus_x", "plus_x", "minus_x")};
    case ModelKind::Lambda: return {pair("a_b", "a", "b"), pair("a_c", "a", "c")};
  }
  return {};
}

Json model_params(const RunConfig& cfg) {
  Json p = cfg.resolved["model"];
  p.erase("name");
  return p;
}

RunConfig with_parameter(const RunConfig& cfg, const std::string& name, double value) {
  Json doc = cfg.resolved;
  doc["model"][name] = value;
  RunConfig out = interpret(doc);
  out.sampler.threads = cfg.sampler.threads;
  return out;
}

}  // namespace infoflow::cli
