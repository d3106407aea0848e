#include "marketnet/pipeline.hpp"

#include "marketnet/errors.hpp"

namespace marketnet {

NetworkAnalysis analyze_panel(const PricePanel& panel, const AnalysisOptions& options) {
    NetworkAnalysis a;
    const ReturnPanel returns = log_returns(panel);
    a.corr = correlation_matrix(returns);
    a.graph = threshold_graph(a.corr, options.rho_c);
    if (a.graph.n_nodes() == 0)
        throw DataError("threshold graph is empty at rho_c = " + std::to_string(options.rho_c));
    a.stats = node_stats(a.graph, options.louvain_seed);

    // Spread graph statistics over the full ticker list; tickers outside the
    // graph behave as isolated singleton communities with no clustering.
    int next_label = 0;
    for (const auto& s : a.stats) next_label = std::max(next_label, s.community + 1);
    a.communities.resize(panel.tickers.size());
    a.clustering.assign(panel.tickers.size(), 0.0);
    for (std::size_t i = 0; i < panel.tickers.size(); ++i) {
        const int at = a.graph.index_of(panel.tickers[i]);
        if (at >= 0) {
            a.communities[i] = a.stats[static_cast<std::size_t>(at)].community;
            a.clustering[i] = a.stats[static_cast<std::size_t>(at)].clustering;
        } else {
            a.communities[i] = next_label++;
        }
    }

    a.split = eigendecompose(a.corr);
    const Eigen::Index t_obs = options.q_counts_prices ? panel.n_dates() : returns.n_obs();
    const double q = static_cast<double>(t_obs) / static_cast<double>(panel.n_stocks());
    a.mp_raw = mp_params(q, 1.0);
    a.mp_rescaled =
        mp_params(q, rescaled_sigma2(a.split.eigenvalues[0], a.corr.size()));

    MarketSelection sel = select_market_modes(a.split, a.stats, a.mp_raw, options.top_fraction);
    a.split = std::move(sel.split);
    a.market_tickers = std::move(sel.market_tickers);

    a.market_matrix = mode_projection(a.split, a.split.market_indices);
    a.noise_matrix = mode_projection(a.split, a.split.noise_indices());
    a.market_rescaled = rescale_correlation(a.market_matrix, a.corr.tickers);
    a.noise_rescaled = rescale_correlation(a.noise_matrix, a.corr.tickers);
    return a;
}

EnsembleConfig build_ensemble_config(const NetworkAnalysis& analysis, const PricePanel& panel,
                                     const BlendWeights& weights, int t_steps) {
    const auto params = estimate_gbm_params_all(panel, 0, panel.n_dates() - 1);
    const auto market = market_channel_assignment(analysis.corr, analysis.market_tickers);

    EnsembleConfig config;
    config.weights = weights;
    config.t_steps = t_steps;
    config.stocks.reserve(panel.tickers.size());
    for (std::size_t i = 0; i < panel.tickers.size(); ++i) {
        StockChannelPlan plan;
        plan.ticker = panel.tickers[i];
        plan.params = params[i];
        plan.community.c_eff = analysis.clustering[i];
        plan.community.seed =
            kCommunitySeedOffset +
            static_cast<std::uint64_t>(static_cast<std::int64_t>(analysis.communities[i]));
        plan.market.c_eff = market[i].strength;
        plan.market.seed = kMarketChannelSeed;
        config.stocks.push_back(std::move(plan));
    }
    return config;
}

}  // namespace marketnet
