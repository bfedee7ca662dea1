#pragma once
// End-to-end experiment drivers. Each produces an artifact bundle (PNGs,
// CSVs, metrics.json, config echo) in an output directory, written through a
// temp directory and swapped into place so reruns replace bundles atomically.
// Stage assertions are recorded in the metrics; a failed assertion makes the
// run report failure while keeping the (fully written) bundle for inspection.

#include <string>
#include <vector>

#include "json.hpp"

namespace holo {

// Root for relative output dirs: $HOLO_OUTPUT_ROOT if set, else "out".
std::string output_root();

struct ExperimentConfig {
  std::string id;          // fig1 | fig2 | pde_check | transfer | normality
  std::string output_dir;  // default <root>/<id>
  long seed = 0;
  nlohmann::json params;   // schema-validated, defaults resolved
};

// Validates keys and types against the experiment's schema and fills
// defaults. Throws std::invalid_argument with the offending key.
ExperimentConfig parse_experiment_config(const nlohmann::json& j);
nlohmann::json experiment_defaults(const std::string& id);

struct BundleResult {
  bool ok = false;
  std::string dir;          // bundle location (empty if aborted before write)
  std::string failure;      // machine-readable JSON when !ok
  nlohmann::json metrics;   // echo of the bundle's metrics.json
};

BundleResult run_fig1(const ExperimentConfig& cfg);
BundleResult run_fig2(const ExperimentConfig& cfg);
BundleResult run_pde_check(const ExperimentConfig& cfg);
BundleResult run_transfer(const ExperimentConfig& cfg);
BundleResult run_normality(const ExperimentConfig& cfg);

BundleResult run_experiment(const ExperimentConfig& cfg);

}  // namespace holo
