#ifndef MARKETNET_GBM_HPP
#define MARKETNET_GBM_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <nlohmann/json_fwd.hpp>
#include <string>
#include <utility>
#include <vector>

#include "marketnet/corrnet.hpp"
#include "marketnet/market_data.hpp"

namespace marketnet {

/// Shared-stream channel: every stock in the channel blends the same Gaussian
/// stream (keyed by seed) into its own noise with strength c_eff in [-1, 1].
struct CorrChannelConfig {
    double c_eff = 0.0;
    std::uint64_t seed = 0;
};

/// Convex weights for the community (L), market (M) and noise (N) walks.
/// A zero weight deactivates its channel; active weights are normalized to
/// sum 1 when blending.
struct BlendWeights {
    double w_l = 0.0;
    double w_m = 0.0;
    double w_n = 0.0;

    double sum() const { return w_l + w_m + w_n; }
};

/// Community channels are namespaced away from market seeds by this offset.
inline constexpr std::uint64_t kCommunitySeedOffset = 1000000;

/// Shared seed of the market channel.
inline constexpr std::uint64_t kMarketChannelSeed = 4376;

/// Everything needed to regenerate one stock's walks.
struct StockChannelPlan {
    std::string ticker;
    GbmParams params;
    CorrChannelConfig community;  // seed = community label + offset, c_eff = clustering
    CorrChannelConfig market;     // seed = kMarketChannelSeed, c_eff = signed correlation
};

struct EnsembleConfig {
    std::vector<StockChannelPlan> stocks;
    BlendWeights weights;
    int t_steps = 0;
    // Divide the blended noise by sqrt((1-c)^2 + c^2) so it stays unit
    // variance. Off by default: the blend is used as written.
    bool renormalize_blend = false;
};

/// Simulated prices for a whole universe; column i is the blended walk of
/// stocks[i]. Regeneration with the same config and master_seed is
/// bit-identical regardless of thread count.
struct WalkEnsemble {
    std::vector<std::string> tickers;
    Eigen::MatrixXd paths;  // t_steps x n_stocks
    EnsembleConfig config;
    std::uint64_t master_seed = 0;
};

/// One correlated GBM path of t_steps prices:
///   eps_k = eps1_k (1 - c) + c eps2_k      (eps1 keyed by own_seed,
///                                           eps2 by channel.seed)
///   W_k   = sum_{j<=k} eps_j * sqrt(dt),   dt = 1
///   S_k   = s0 exp((mu - sigma^2/2) k + sigma W_k)
/// The blend is not variance-normalized unless renormalize is set.
Eigen::VectorXd simulate_gbm_corr(const GbmParams& params, int t_steps,
                                  const CorrChannelConfig& channel, std::uint64_t own_seed,
                                  std::uint64_t master_seed, bool renormalize = false);

/// Community-correlated walks S^L: per stock, the channel seed is its
/// community label (offset) and c_eff its weighted clustering coefficient.
/// All vectors are aligned with tickers.
Eigen::MatrixXd community_walks(const std::vector<std::string>& tickers,
                                const std::vector<GbmParams>& params,
                                const std::vector<int>& communities,
                                const std::vector<double>& clustering, int t_steps,
                                std::uint64_t master_seed, bool renormalize = false);

/// Market-channel coupling of one stock: which market ticker it follows and
/// the signed correlation used as c_eff.
struct MarketChannelAssignment {
    int market_index = -1;  // position in the market ticker list
    double strength = 0.0;
};

/// Per stock: the market ticker maximizing |C(stock, market)| (a market stock
/// maps to itself with strength 1); ties keep the earliest list position.
std::vector<MarketChannelAssignment> market_channel_assignment(
    const CorrMatrix& corr, const std::vector<std::string>& market_tickers);

/// Market-correlated walks S^M: shared seed kMarketChannelSeed, c_eff from
/// market_channel_assignment. params aligned with corr.tickers.
Eigen::MatrixXd market_walks(const CorrMatrix& corr,
                             const std::vector<GbmParams>& params,
                             const std::vector<std::string>& market_tickers, int t_steps,
                             std::uint64_t master_seed, bool renormalize = false);

/// Independent pure-GBM walks S^N (c_eff = 0).
Eigen::MatrixXd noise_walks(const std::vector<std::string>& tickers,
                            const std::vector<GbmParams>& params, int t_steps,
                            std::uint64_t master_seed);

/// Pointwise weighted average of price paths; weights >= 0, normalized to
/// sum 1. Throws DataError on length mismatch or all-zero weights.
Eigen::VectorXd blend_walks(const std::vector<std::pair<double, Eigen::VectorXd>>& components);

/// Build the full blended ensemble. Parallel over stocks; the counter-based
/// streams make the result independent of scheduling.
WalkEnsemble generate_ensemble(const EnsembleConfig& config, std::uint64_t master_seed,
                               unsigned n_threads = 0);

/// Correlation matrix of the ensemble's log-returns.
CorrMatrix simulated_correlation(const WalkEnsemble& ensemble);

/// Reinterpret the ensemble as a price panel (synthetic dates) so simulated
/// prices flow through every loader-facing operation.
PricePanel ensemble_to_panel(const WalkEnsemble& ensemble);

void to_json(nlohmann::json& j, const BlendWeights& w);
void from_json(const nlohmann::json& j, BlendWeights& w);
void to_json(nlohmann::json& j, const EnsembleConfig& c);
void from_json(const nlohmann::json& j, EnsembleConfig& c);

}  // namespace marketnet

#endif  // MARKETNET_GBM_HPP
