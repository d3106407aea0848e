#include "marketnet/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <nlohmann/json.hpp>
#include <optional>

#include "marketnet/calibrate.hpp"
#include "marketnet/csv.hpp"
#include "marketnet/errors.hpp"
#include "marketnet/pipeline.hpp"
#include "marketnet/portfolio.hpp"

namespace marketnet {
namespace {

PricePanel load_clean_panel(const RunConfig& config) {
    std::optional<std::filesystem::path> sectors;
    if (!config.sector_csv.empty()) sectors = config.sector_csv;
    return clean_universe(load_price_panel(config.price_csv, sectors));
}

AnalysisOptions analysis_options(const RunConfig& config) {
    AnalysisOptions opt;
    opt.rho_c = config.rho_c;
    opt.top_fraction = config.top_fraction;
    opt.louvain_seed = config.louvain_seed;
    opt.q_counts_prices = config.q_counts_prices;
    return opt;
}

void write(const RunConfig& config, const std::string& name, const std::string& text) {
    const auto path = config.out_dir / name;
    csv::write_file(path, text);
    std::printf("wrote %s\n", path.c_str());
}

std::pair<double, double> mean_std(const std::vector<double>& v) {
    if (v.empty()) return {0.0, 0.0};
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    const double sd = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
    return {mean, sd};
}

std::vector<double> node_values(const std::vector<NodeStats>& stats,
                                double (*pick)(const NodeStats&)) {
    std::vector<double> out;
    out.reserve(stats.size());
    for (const auto& s : stats) out.push_back(pick(s));
    return out;
}

void write_network_artifacts(const RunConfig& config, const PricePanel& panel,
                             const StockGraph& graph,
                             const std::vector<NodeStats>& stats) {
    write(config, "edges.csv", edges_to_csv(graph));
    write(config, "nodes.csv", nodes_to_csv(stats, panel.sectors));

    const auto degrees =
        node_values(stats, [](const NodeStats& s) { return static_cast<double>(s.degree); });
    const auto centr = node_values(stats, [](const NodeStats& s) { return s.eigencentrality; });
    const auto clust = node_values(stats, [](const NodeStats& s) { return s.clustering; });
    write(config, "degree_hist.csv",
          histogram_to_csv(histogram(degrees, config.histogram_bins)));
    write(config, "eigencentrality_hist.csv",
          histogram_to_csv(histogram(centr, config.histogram_bins)));
    write(config, "clustering_hist.csv",
          histogram_to_csv(histogram(clust, config.histogram_bins, 0.0, 1.0)));

    int n_communities = 0;
    double q = 0.0;
    if (!stats.empty()) {
        std::vector<int> labels;
        labels.reserve(stats.size());
        for (const auto& s : stats) labels.push_back(s.community);
        n_communities = 1 + *std::max_element(labels.begin(), labels.end());
        q = modularity_of_labels(graph, labels);
    }
    nlohmann::json j{{"n_nodes", graph.n_nodes()},
                     {"n_edges", graph.n_edges()},
                     {"rho_c", graph.rho_c},
                     {"n_communities", n_communities},
                     {"modularity", q}};
    write(config, "network_summary.json", j.dump(2) + "\n");
    std::printf("network: %zu nodes, %zu edges, %d communities, modularity %.4f\n",
                graph.n_nodes(), graph.n_edges(), n_communities, q);
}

void write_spectral_artifacts(const RunConfig& config, const NetworkAnalysis& a) {
    write(config, "spectrum.csv", spectrum_to_csv(a.split));
    write(config, "mp_overlay.csv",
          spectrum_histogram_to_csv(
              eigenvalue_histogram(a.split, config.histogram_bins, a.mp_raw, a.mp_rescaled)));

    write(config, "corr_matrix.csv", csv::labeled_matrix_to_csv(a.corr.tickers, a.corr.values));
    write(config, "market_matrix.csv",
          csv::labeled_matrix_to_csv(a.corr.tickers, a.market_matrix));
    write(config, "noise_matrix.csv",
          csv::labeled_matrix_to_csv(a.corr.tickers, a.noise_matrix));

    const auto data_off = offdiagonal_entries(a.corr.values);
    const auto market_off = a.market_rescaled.offdiagonal();
    const auto noise_off = a.noise_rescaled.offdiagonal();
    write(config, "corr_hist.csv",
          histogram_to_csv(histogram(data_off, config.histogram_bins, -1.0, 1.0)));
    write(config, "market_hist.csv",
          histogram_to_csv(histogram(market_off, config.histogram_bins, -1.0, 1.0)));
    write(config, "noise_hist.csv",
          histogram_to_csv(histogram(noise_off, config.histogram_bins, -1.0, 1.0)));

    const auto [dm, ds] = mean_std(data_off);
    const auto [mm, ms] = mean_std(market_off);
    const auto [nm, ns] = mean_std(noise_off);
    nlohmann::json j{
        {"lambda_max", a.split.eigenvalues[0]},
        {"n_market", a.split.n_market},
        {"market_tickers", a.market_tickers},
        {"q", a.mp_raw.q},
        {"mp_raw", {{"sigma2", a.mp_raw.sigma2}, {"lambda_plus", a.mp_raw.lambda_plus}}},
        {"mp_rescaled",
         {{"sigma2", a.mp_rescaled.sigma2}, {"lambda_plus", a.mp_rescaled.lambda_plus}}},
        {"offdiag_stats",
         {{"data", {{"mean", dm}, {"std", ds}}},
          {"market", {{"mean", mm}, {"std", ms}}},
          {"noise", {{"mean", nm}, {"std", ns}}}}}};
    write(config, "spectral_summary.json", j.dump(2) + "\n");
    std::printf("spectral: lambda_max %.4f, n_market %d, market mean/std %.3f/%.3f\n",
                a.split.eigenvalues[0], a.split.n_market, mm, ms);
}

struct FitOutputs {
    FitResult market;
    FitResult noise;
    FitResult total;
};

FitOutputs run_and_write_fits(const RunConfig& config, const PricePanel& panel,
                              const NetworkAnalysis& a) {
    const int t_steps = static_cast<int>(panel.n_dates());
    const EnsembleConfig base =
        build_ensemble_config(a, panel, BlendWeights{}, t_steps);
    const auto simulate = [&base](const BlendWeights& w, std::uint64_t seed) {
        EnsembleConfig cfg = base;
        cfg.weights = w;
        return simulated_correlation(generate_ensemble(cfg, seed));
    };
    const auto seeds = config.effective_fit_seeds();

    auto one = [&](const std::string& name, const std::vector<Channel>& active,
                   const std::vector<double>& target) {
        FitResult r = fit_weights(target, simulate, active, config.grid_step, seeds);
        nlohmann::json j = r;
        write(config, "fit_" + name + ".json", j.dump(2) + "\n");

        // Overlay: target vs simulated entry distribution at the best point.
        const auto sim_off =
            offdiagonal_entries(simulate(r.weights, seeds.front()).values);
        const Histogram ht = histogram(target, config.histogram_bins, -1.0, 1.0);
        const Histogram hs = histogram(sim_off, config.histogram_bins, -1.0, 1.0);
        std::string csv_text = "bin_left,bin_right,target_count,sim_count\n";
        for (std::size_t b = 0; b < ht.counts.size(); ++b) {
            csv_text += csv::format_double(ht.edges[b]);
            csv_text += ',';
            csv_text += csv::format_double(ht.edges[b + 1]);
            csv_text += ',';
            csv_text += std::to_string(ht.counts[b]);
            csv_text += ',';
            csv_text += std::to_string(hs.counts[b]);
            csv_text += '\n';
        }
        write(config, "fit_" + name + "_hist.csv", csv_text);
        std::printf("fit %s: w_l %.3f, w_m %.3f, w_n %.3f (distance %.5f, %d evals)\n",
                    name.c_str(), r.weights.w_l, r.weights.w_m, r.weights.w_n, r.distance,
                    r.evaluations);
        return r;
    };

    FitOutputs out;
    out.market = one("market", {Channel::community, Channel::market},
                     a.market_rescaled.offdiagonal());
    out.noise =
        one("noise", {Channel::community, Channel::noise}, a.noise_rescaled.offdiagonal());
    out.total = one("total", {Channel::community, Channel::market, Channel::noise},
                    offdiagonal_entries(a.corr.values));
    return out;
}

void run_and_write_backtest(const RunConfig& config, const PricePanel& panel,
                            const BlendWeights& weights) {
    BacktestConfig btc;
    btc.r_f = config.r_f;
    btc.min_weight = config.min_weight;
    btc.master_seed = config.master_seed;
    btc.sim_rho_c = config.rho_c;
    btc.sim_top_fraction = config.top_fraction;
    btc.sim_louvain_seed = config.louvain_seed;
    btc.sim_weights = weights;
    btc.sim_q_counts_prices = config.q_counts_prices;

    const ComparisonReport report =
        compare_strategies(panel, config.dt_values, config.n_runs, btc);
    for (const auto& cmp : report.by_dt) {
        write(config, "backtest_dt" + std::to_string(cmp.dt) + ".csv",
              comparison_to_csv(cmp));
        std::printf("backtest dt %d: historical %.2f%%, simulated mean %.2f%% over %d runs\n",
                    cmp.dt, 100.0 * cmp.historical_cum, 100.0 * cmp.simulated_mean,
                    report.n_runs);
    }
    nlohmann::json j = report;
    write(config, "backtest_summary.json", j.dump(2) + "\n");
}

}  // namespace

void cmd_network(const RunConfig& config) {
    validate(config);
    const PricePanel panel = load_clean_panel(config);
    const CorrMatrix corr = correlation_matrix(log_returns(panel));
    const StockGraph graph = threshold_graph(corr, config.rho_c);
    const std::vector<NodeStats> stats =
        graph.n_nodes() == 0 ? std::vector<NodeStats>{}
                             : node_stats(graph, config.louvain_seed);
    write_network_artifacts(config, panel, graph, stats);
}

void cmd_spectral(const RunConfig& config) {
    validate(config);
    const PricePanel panel = load_clean_panel(config);
    write_spectral_artifacts(config, analyze_panel(panel, analysis_options(config)));
}

void cmd_fit(const RunConfig& config) {
    validate(config);
    const PricePanel panel = load_clean_panel(config);
    run_and_write_fits(config, panel, analyze_panel(panel, analysis_options(config)));
}

void cmd_backtest(const RunConfig& config) {
    validate(config);
    const PricePanel panel = load_clean_panel(config);
    run_and_write_backtest(config, panel, config.backtest_weights);
}

void cmd_all(const RunConfig& config) {
    validate(config);
    const PricePanel panel = load_clean_panel(config);
    const NetworkAnalysis analysis = analyze_panel(panel, analysis_options(config));
    write_network_artifacts(config, panel, analysis.graph, analysis.stats);
    write_spectral_artifacts(config, analysis);
    const FitOutputs fits = run_and_write_fits(config, panel, analysis);

    BlendWeights bw;
    bw.w_l = fits.market.weights.w_l;
    bw.w_m = fits.market.weights.w_m;
    std::printf("backtest uses fitted market weights (w_l %.3f, w_m %.3f)\n", bw.w_l, bw.w_m);
    run_and_write_backtest(config, panel, bw);
}

}  // namespace marketnet
