#include "marketnet/run_config.hpp"

#include <fstream>
#include <nlohmann/json.hpp>

#include "marketnet/errors.hpp"
#include "marketnet/rng.hpp"

namespace marketnet {

std::vector<std::uint64_t> RunConfig::effective_fit_seeds() const {
    if (!fit_seeds.empty()) return fit_seeds;
    std::vector<std::uint64_t> out;
    out.reserve(3);
    for (std::uint64_t k = 1; k <= 3; ++k)
        out.push_back(rng::splitmix64(master_seed ^ (0xA5A5A5A5A5A5A5A5ULL + k)));
    return out;
}

RunConfig parse_run_config(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("config is not valid JSON: ") + e.what());
    }

    RunConfig c;
    try {
        c.price_csv = j.value("price_csv", std::string());
        c.sector_csv = j.value("sector_csv", std::string());
        c.out_dir = j.value("out_dir", std::string("out"));
        c.rho_c = j.value("rho_c", c.rho_c);
        c.top_fraction = j.value("top_fraction", c.top_fraction);
        c.q_counts_prices = j.value("q_counts_prices", c.q_counts_prices);
        c.master_seed = j.value("master_seed", c.master_seed);
        c.louvain_seed = j.value("louvain_seed", c.louvain_seed);
        if (j.contains("fit_seeds"))
            c.fit_seeds = j.at("fit_seeds").get<std::vector<std::uint64_t>>();
        c.grid_step = j.value("grid_step", c.grid_step);
        c.histogram_bins = j.value("histogram_bins", c.histogram_bins);
        if (j.contains("dt_values")) c.dt_values = j.at("dt_values").get<std::vector<int>>();
        c.n_runs = j.value("n_runs", c.n_runs);
        c.r_f = j.value("r_f", c.r_f);
        c.min_weight = j.value("min_weight", c.min_weight);
        if (j.contains("backtest_weights"))
            c.backtest_weights = j.at("backtest_weights").get<BlendWeights>();
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("config field has the wrong type: ") + e.what());
    }
    return c;
}

RunConfig load_run_config(const std::filesystem::path& json_path) {
    std::ifstream in(json_path, std::ios::binary);
    if (!in) throw Error("cannot open config: " + json_path.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_run_config(text);
}

std::string run_config_to_json(const RunConfig& config) {
    nlohmann::json j{{"price_csv", config.price_csv.string()},
                     {"sector_csv", config.sector_csv.string()},
                     {"out_dir", config.out_dir.string()},
                     {"rho_c", config.rho_c},
                     {"top_fraction", config.top_fraction},
                     {"q_counts_prices", config.q_counts_prices},
                     {"master_seed", config.master_seed},
                     {"louvain_seed", config.louvain_seed},
                     {"fit_seeds", config.effective_fit_seeds()},
                     {"grid_step", config.grid_step},
                     {"histogram_bins", config.histogram_bins},
                     {"dt_values", config.dt_values},
                     {"n_runs", config.n_runs},
                     {"r_f", config.r_f},
                     {"min_weight", config.min_weight},
                     {"backtest_weights", config.backtest_weights}};
    return j.dump(2) + "\n";
}

void validate(const RunConfig& config, bool require_prices) {
    if (require_prices) {
        if (config.price_csv.empty()) throw DataError("config: price_csv is required");
        if (!std::filesystem::exists(config.price_csv))
            throw DataError("config: price_csv does not exist: " + config.price_csv.string());
        if (!config.sector_csv.empty() && !std::filesystem::exists(config.sector_csv))
            throw DataError("config: sector_csv does not exist: " +
                            config.sector_csv.string());
    }
    if (config.rho_c < 0.0 || config.rho_c > 1.0)
        throw DataError("config: rho_c must lie in [0, 1]");
    if (!(config.top_fraction > 0.0 && config.top_fraction <= 1.0))
        throw DataError("config: top_fraction must lie in (0, 1]");
    if (!(config.grid_step > 0.0 && config.grid_step <= 1.0))
        throw DataError("config: grid_step must lie in (0, 1]");
    if (config.histogram_bins < 1) throw DataError("config: histogram_bins must be >= 1");
    if (config.dt_values.empty()) throw DataError("config: dt_values is empty");
    for (int dt : config.dt_values)
        if (dt < 2) throw DataError("config: every dt must be >= 2 days");
    if (config.n_runs < 1) throw DataError("config: n_runs must be >= 1");
    if (config.min_weight < 0.0) throw DataError("config: min_weight must be >= 0");
    if (config.backtest_weights.w_l < 0.0 || config.backtest_weights.w_m < 0.0 ||
        config.backtest_weights.w_n < 0.0 || config.backtest_weights.sum() <= 0.0)
        throw DataError("config: backtest_weights must be non-negative and not all zero");
}

}  // namespace marketnet
