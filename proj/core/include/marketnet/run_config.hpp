#ifndef MARKETNET_RUN_CONFIG_HPP
#define MARKETNET_RUN_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "marketnet/gbm.hpp"

namespace marketnet {

/// Everything a pipeline run needs, loadable from a JSON config file.
/// Unset fields keep their defaults; CLI flags override file values.
struct RunConfig {
    std::filesystem::path price_csv;
    std::filesystem::path sector_csv;  // optional; empty = no sector map
    std::filesystem::path out_dir = "out";

    double rho_c = 0.9;
    double top_fraction = 0.03;
    bool q_counts_prices = false;

    std::uint64_t master_seed = 1;     // backtest runs + fit-seed derivation
    std::uint64_t louvain_seed = 7;
    std::vector<std::uint64_t> fit_seeds;  // empty = derive 3 from master_seed

    double grid_step = 0.02;
    int histogram_bins = 50;

    std::vector<int> dt_values{252, 126, 84, 63, 42, 31};
    int n_runs = 10;
    double r_f = 0.0;
    double min_weight = 0.0005;
    BlendWeights backtest_weights{0.26, 0.74, 0.0};

    /// Fit ensemble seeds: the explicit list, or 3 seeds derived from
    /// master_seed when the list is empty.
    std::vector<std::uint64_t> effective_fit_seeds() const;
};

RunConfig load_run_config(const std::filesystem::path& json_path);
RunConfig parse_run_config(const std::string& json_text);
std::string run_config_to_json(const RunConfig& config);

/// Checks ranges and, when require_prices is set, that the input files
/// exist. Throws DataError with the offending field named.
void validate(const RunConfig& config, bool require_prices = true);

}  // namespace marketnet

#endif  // MARKETNET_RUN_CONFIG_HPP
