#pragma once

// Run configuration: a JSON document merged over per-model defaults, with
// `--set dotted.key=value` overrides on top. All quantities in units of the
// reservoir width lambda (times in 1/lambda).

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "infoflow/measure.hpp"
#include "infoflow/models/dephasing.hpp"
#include "infoflow/models/jc.hpp"
#include "infoflow/models/lambda_model.hpp"

namespace infoflow::cli {

using Json = nlohmann::json;

inline constexpr const char* kFormatVersion = "infoflow-output/1";

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ModelKind { JC, Dephasing, Lambda };

const char* to_string(ModelKind kind);

struct NamedPair {
  std::string name;
  StatePair pair;
};

struct SweepSpec {
  std::string parameter;  // key inside the model section
  std::vector<double> values;
};

struct RunConfig {
  ModelKind model;
  models::JCParams jc{5.0, 1.0};
  models::DephasingParams dephasing{1.0};
  models::LambdaParams lambda{0.01, 1.0, 6.0, 5.0};
  models::QuadratureConfig quadrature;
  double t_max;
  std::size_t n_steps;
  SamplerConfig sampler;  // candidates filled from the model, threads from the command line
  bool use_candidates = true;
  std::optional<StatePair> pair;
  std::optional<SweepSpec> sweep;
  Json resolved;  // the merged document these fields were read from
};

/// Parses JSON text; syntax errors report line and column.
Json parse_config_text(const std::string& text, const std::string& origin);

Json read_config_file(const std::string& path);

/// Applies one `dotted.key=value` override. The value is read as JSON when it
/// parses as JSON and as a plain string otherwise.
void apply_override(Json& doc, const std::string& assignment);

/// Defaults for the model named in `doc` (jc when absent), overlaid by `doc`.
Json resolve(const Json& doc);

/// Type- and range-checks the resolved document.
RunConfig interpret(const Json& resolved);

/// File (optional) + overrides + seed override, resolved and interpreted.
RunConfig load_config(const std::optional<std::string>& path, const std::vector<std::string>& overrides,
                      std::optional<std::uint64_t> seed = std::nullopt);

/// A named state, a Bloch vector {"bloch": [x, y, z]} (qubits) or a matrix
/// {"re": [[...]], "im": [[...]]}.
DensityMatrix parse_state(const Json& spec, Index dim, const std::string& field);

Json state_to_json(const DensityMatrix& rho);

Index model_dim(ModelKind kind);

MapFamily build_family(const RunConfig& cfg);

TimeGrid build_grid(const RunConfig& cfg);

/// The analytic maximizer candidates of the selected model.
std::vector<NamedPair> model_candidates(ModelKind kind);

/// Model parameters as a JSON object (the `params` field of documents).
Json model_params(const RunConfig& cfg);

/// Copy of cfg with model parameter `name` set to `value` (re-validated).
RunConfig with_parameter(const RunConfig& cfg, const std::string& name, double value);

}  // namespace infoflow::cli
