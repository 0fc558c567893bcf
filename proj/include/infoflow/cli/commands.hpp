#pragma once

// The four verbs. Each builds an in-memory document from a resolved config;
// run_cli wires them to argv, files and exit codes.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "infoflow/cli/config.hpp"
#include "infoflow/cli/csv.hpp"

namespace infoflow::cli {

enum class OutputFormat { Csv, Json };

enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitNumerical = 2, kExitIo = 3 };

/// Sorted keys, two-space indent, trailing newline. Throws Error(NonFinite)
/// if any number is NaN or infinite.
std::string dump_json(const Json& doc);

/// Metadata lines shared by all CSV outputs: format version, units, config.
std::vector<std::string> csv_metadata(const RunConfig& cfg);

/// Columns t, D, sigma, growth_flag for cfg.pair. growth_flag is 1 on samples
/// that start a growing step of a detected growth interval.
CsvTable trajectory_table(const RunConfig& cfg);
Json trajectory_document(const RunConfig& cfg);

MeasureResult run_measure(const RunConfig& cfg, std::size_t threads);
Json measure_document(const RunConfig& cfg, std::size_t threads);
CsvTable measure_table(const RunConfig& cfg, std::size_t threads);

/// Columns sweep_value, N_best, N_candidate_1, ... Failed points leave
/// their measure fields empty and print a warning to `progress`.
CsvTable sweep_table(const RunConfig& cfg, std::size_t threads, std::ostream* progress);
Json sweep_document(const CsvTable& table, const RunConfig& cfg);

Json validate_document(const RunConfig& cfg);

/// Full command line: `infoflow <verb> [options]`. Returns the exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace infoflow::cli
