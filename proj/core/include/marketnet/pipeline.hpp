#ifndef MARKETNET_PIPELINE_HPP
#define MARKETNET_PIPELINE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "marketnet/corrnet.hpp"
#include "marketnet/gbm.hpp"
#include "marketnet/market_data.hpp"
#include "marketnet/spectral.hpp"

namespace marketnet {

struct AnalysisOptions {
    double rho_c = 0.9;
    double top_fraction = 0.03;  // influential-node rank cut
    std::uint64_t louvain_seed = 7;
    // Aspect ratio Q = T/N counts return observations by default; set to
    // count price rows instead.
    bool q_counts_prices = false;
};

/// Network + spectral decomposition of one price panel, the shared front end
/// of the CLI commands and the simulated-market backtest strategy.
///
/// communities/clustering are aligned with panel tickers: tickers outside the
/// threshold graph get clustering 0 and fresh singleton community labels
/// after the graph's own labels.
struct NetworkAnalysis {
    CorrMatrix corr;
    StockGraph graph;
    std::vector<NodeStats> stats;  // aligned with graph.nodes

    std::vector<int> communities;     // aligned with panel tickers
    std::vector<double> clustering;   // aligned with panel tickers

    MpParams mp_raw;       // sigma2 = 1
    MpParams mp_rescaled;  // sigma2 = 1 - lambda_max/N

    SpectralSplit split;  // market_indices filled
    std::vector<std::string> market_tickers;

    Eigen::MatrixXd market_matrix;  // projection onto market modes
    Eigen::MatrixXd noise_matrix;   // complement
    RescaledCorr market_rescaled;
    RescaledCorr noise_rescaled;
};

/// Runs returns -> correlation -> graph -> node stats -> spectrum -> market
/// selection -> projections. Throws when the graph is empty, the influential
/// intersection is empty, or a market eigenvalue falls below the
/// Marchenko-Pastur edge.
NetworkAnalysis analyze_panel(const PricePanel& panel, const AnalysisOptions& options);

/// Ensemble configuration reproducing the panel: per-stock GBM parameters
/// estimated over the whole panel, community channels from the analysis,
/// market channel from the correlation matrix.
EnsembleConfig build_ensemble_config(const NetworkAnalysis& analysis, const PricePanel& panel,
                                     const BlendWeights& weights, int t_steps);

}  // namespace marketnet

#endif  // MARKETNET_PIPELINE_HPP
