#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bdp/rates.hpp"
#include "bdp/triple.hpp"

namespace bdp {

/// Validated experiment plan assembled from a flat sectioned key-value file
/// with dotted keys. Unknown keys are rejected with a nearest-key suggestion.
struct ExperimentPlan {
    std::string command;

    std::optional<BirthDeathRates> rates;
    std::optional<ParameterTriple> triple;

    std::vector<double> alphas{1.0};
    std::vector<std::int64_t> n_grid{2, 4, 8, 16, 32};
    std::vector<std::int64_t> probe_k{0, 1, 2, 4, 8};
    std::string scheme = "truncation";
    std::string payload_kind = "indicator";
    std::int64_t payload_index = 0;
    std::int64_t depth_k = 32;
    double tol = 1e-8;
    double threshold = 1e-6;

    std::string sim_kind = "minimal";
    std::int64_t sim_i0 = 0;
    std::int64_t sim_cap = 256;
    double sim_horizon = 10.0;
    std::int64_t sim_count = 1;
    std::int64_t sim_n = 8;
    std::int64_t sim_max_events = 1 << 22;

    std::string mc_experiment = "dprime";
    std::int64_t mc_count = 200;
    std::uint64_t mc_seed = 1;
    int mc_threads = 1;
    double mc_horizon = 10.0;
    std::vector<double> mc_times{0.0, 0.5, 1.0};
    std::vector<std::string> mc_fns{"embed"};

    std::string distance_a, distance_b;
    double distance_t = 2.0;
    int distance_jmax = 40;

    std::string out_dir = "./out";
    std::string config_hash;  ///< 16 hex digits over the canonical key set
};

/// Raw key-value content of a config file; keys keep their line numbers for
/// diagnostics.
struct ConfigMap {
    std::map<std::string, std::string> values;
    std::map<std::string, int> lines;
};

ConfigMap read_config_file(const std::string& path);       // throws ParseError
ExperimentPlan make_plan(const ConfigMap& config,
                         const std::string& command_override = "");  // throws ValidationError

}  // namespace bdp
