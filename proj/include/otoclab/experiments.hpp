#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "otoclab/config.hpp"
#include "otoclab/record.hpp"

namespace otoclab {

struct ExperimentInfo {
    std::string name;
    std::string description;
};

const std::vector<ExperimentInfo>& experiment_catalog();

struct ExperimentOutput {
    std::string experiment;
    Table table;
    nlohmann::json summary;  // derived scalars (fits, counts)
    std::vector<std::string> violations;
};

// Runs the experiment named by the "experiment" key. The "seed" key fixes
// every random draw.
ExperimentOutput run_experiment(const Config& config);

// Re-checks the invariants of a record from its stored text. Returns one
// message per violation.
std::vector<std::string> check_record(const std::string& experiment, const Table& t, const nlohmann::json& summary);

// JSON sidecar for a finished run.
nlohmann::json sidecar(const Config& config, const ExperimentOutput& out, double runtime_seconds, int threads);

}  // namespace otoclab
