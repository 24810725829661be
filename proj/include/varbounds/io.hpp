#pragma once

#include "varbounds/bounds.hpp"
#include "varbounds/calculus.hpp"
#include "varbounds/distribution.hpp"
#include "varbounds/expectation.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace varbounds {

/// Distribution document, either
///   {"family": "poisson", "params": {"lambda": 2}, "quadratic": [d, b, g]?}
/// or
///   {"custom": {"kind": "continuous"|"discrete", "mean": m,
///               "quadratic": [d, b, g] | null, "support": [a, b],
///               "density_table" | "pmf_table": [[x, f], ...]}}
/// Support ends may be null or "-inf"/"inf". Density tables are interpolated
/// by local cubics through the four nearest rows; pmf tables list integer
/// nodes and absent integers have mass zero. The support is clipped to the
/// tabulated range.
Distribution parse_distribution(const std::string& json_text);
Distribution load_distribution(const std::filesystem::path& path);

/// Accepts a path to a JSON document, an inline JSON object, or the compact
/// form "name:key=value,key=value" (e.g. "beta:a=2,b=3").
Distribution distribution_from_argument(const std::string& arg);

/// {"functions": [{"poly": [c0, c1, ...]} | {"expr": "..."}, ...]}; each entry
/// may carry "label" and "max_order".
FunctionTuple parse_functions(const std::string& json_text);
FunctionTuple load_functions(const std::filesystem::path& path);
/// Path, inline JSON, or a ';'-separated list of expressions.
FunctionTuple functions_from_argument(const std::string& arg);

struct OutputOptions {
  std::string json_path;
  std::string csv_path;
  int verbosity = 1;
};

struct RunConfig {
  Distribution distribution;
  FunctionTuple functions;
  std::vector<int> orders;
  std::vector<Theorem> theorems{Theorem::poincare, Theorem::bessel};
  EngineConfig engine;
  double tol_factor = 1e-6;
  OutputOptions output;
};

/// Run configuration; "distribution" and "functions" may be inline documents
/// or paths relative to the configuration file.
RunConfig load_run_config(const std::filesystem::path& path);
RunConfig parse_run_config(const std::string& json_text, const std::filesystem::path& base_dir = {});

/// Applies an "engine" JSON object onto cfg.
void apply_engine_overrides(EngineConfig& cfg, const std::string& json_text);

std::string report_to_json(const BoundReport& report, int indent = 2);
BoundReport report_from_json(const std::string& json_text);
/// A JSON array of reports; the reader also accepts a single report object.
std::string reports_to_json(const std::vector<BoundReport>& reports, int indent = 2);
std::vector<BoundReport> reports_from_json(const std::string& json_text);
/// One row per eigenvalue: n,theorem,index,eigenvalue
std::string report_to_csv(const std::vector<BoundReport>& reports);

std::string read_text_file(const std::filesystem::path& path);

} // namespace varbounds
