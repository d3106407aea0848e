#include "marketnet/gbm.hpp"

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>

#include "marketnet/errors.hpp"
#include "marketnet/parallel.hpp"
#include "marketnet/rng.hpp"

namespace marketnet {
namespace {

void check_channel(const CorrChannelConfig& ch) {
    if (std::abs(ch.c_eff) > 1.0)
        throw DataError("channel strength " + std::to_string(ch.c_eff) + " outside [-1, 1]");
}

void check_aligned(std::size_t tickers, std::size_t params, const char* what) {
    if (tickers != params)
        throw DataError(std::string(what) + ": got " + std::to_string(params) +
                        " entries for " + std::to_string(tickers) + " tickers");
}

}  // namespace

Eigen::VectorXd simulate_gbm_corr(const GbmParams& params, int t_steps,
                                  const CorrChannelConfig& channel, std::uint64_t own_seed,
                                  std::uint64_t master_seed, bool renormalize) {
    if (t_steps < 1) throw DataError("t_steps must be >= 1");
    check_channel(channel);

    const double c = channel.c_eff;
    const double scale = renormalize ? 1.0 / std::sqrt((1.0 - c) * (1.0 - c) + c * c) : 1.0;
    const double drift = params.mu - 0.5 * params.sigma * params.sigma;

    Eigen::VectorXd path(t_steps);
    double cum = 0.0;
    for (int k = 0; k < t_steps; ++k) {
        double eps = (1.0 - c) * rng::normal_at(master_seed, rng::StreamKind::own_noise,
                                                own_seed, static_cast<std::uint64_t>(k));
        if (c != 0.0)
            eps += c * rng::normal_at(master_seed, rng::StreamKind::channel, channel.seed,
                                      static_cast<std::uint64_t>(k));
        cum += eps * scale;
        path[k] = params.s0 * std::exp(drift * k + params.sigma * cum);
    }
    return path;
}

Eigen::MatrixXd community_walks(const std::vector<std::string>& tickers,
                                const std::vector<GbmParams>& params,
                                const std::vector<int>& communities,
                                const std::vector<double>& clustering, int t_steps,
                                std::uint64_t master_seed, bool renormalize) {
    check_aligned(tickers.size(), params.size(), "community walks params");
    check_aligned(tickers.size(), communities.size(), "community labels");
    check_aligned(tickers.size(), clustering.size(), "clustering values");

    Eigen::MatrixXd paths(t_steps, static_cast<Eigen::Index>(tickers.size()));
    parallel_for(static_cast<std::int64_t>(tickers.size()), [&](std::int64_t i) {
        const auto u = static_cast<std::size_t>(i);
        CorrChannelConfig ch;
        ch.c_eff = clustering[u];
        ch.seed = kCommunitySeedOffset +
                  static_cast<std::uint64_t>(static_cast<std::int64_t>(communities[u]));
        const std::uint64_t own = rng::derive_own_seed(master_seed, tickers[u], 'L');
        paths.col(static_cast<Eigen::Index>(i)) =
            simulate_gbm_corr(params[u], t_steps, ch, own, master_seed, renormalize);
    });
    return paths;
}

std::vector<MarketChannelAssignment> market_channel_assignment(
    const CorrMatrix& corr, const std::vector<std::string>& market_tickers) {
    if (market_tickers.empty()) throw DataError("market ticker list is empty");

    std::vector<Eigen::Index> market_cols;
    market_cols.reserve(market_tickers.size());
    for (const auto& mt : market_tickers) {
        auto it = std::find(corr.tickers.begin(), corr.tickers.end(), mt);
        if (it == corr.tickers.end())
            throw DataError("market ticker " + mt + " not in the correlation matrix");
        market_cols.push_back(it - corr.tickers.begin());
    }

    std::vector<MarketChannelAssignment> out(static_cast<std::size_t>(corr.size()));
    for (Eigen::Index i = 0; i < corr.size(); ++i) {
        auto& a = out[static_cast<std::size_t>(i)];
        auto self = std::find(market_cols.begin(), market_cols.end(), i);
        if (self != market_cols.end()) {
            a.market_index = static_cast<int>(self - market_cols.begin());
            a.strength = 1.0;
            continue;
        }
        double best = -1.0;
        for (std::size_t k = 0; k < market_cols.size(); ++k) {
            const double v = std::abs(corr.values(i, market_cols[k]));
            if (v > best) {
                best = v;
                a.market_index = static_cast<int>(k);
            }
        }
        a.strength = corr.values(i, market_cols[static_cast<std::size_t>(a.market_index)]);
    }
    return out;
}

Eigen::MatrixXd market_walks(const CorrMatrix& corr,
                             const std::vector<GbmParams>& params,
                             const std::vector<std::string>& market_tickers, int t_steps,
                             std::uint64_t master_seed, bool renormalize) {
    check_aligned(corr.tickers.size(), params.size(), "market walks params");
    const auto assign = market_channel_assignment(corr, market_tickers);

    Eigen::MatrixXd paths(t_steps, corr.size());
    parallel_for(static_cast<std::int64_t>(corr.tickers.size()), [&](std::int64_t i) {
        const auto u = static_cast<std::size_t>(i);
        CorrChannelConfig ch;
        ch.c_eff = assign[u].strength;
        ch.seed = kMarketChannelSeed;
        const std::uint64_t own = rng::derive_own_seed(master_seed, corr.tickers[u], 'M');
        paths.col(static_cast<Eigen::Index>(i)) =
            simulate_gbm_corr(params[u], t_steps, ch, own, master_seed, renormalize);
    });
    return paths;
}

Eigen::MatrixXd noise_walks(const std::vector<std::string>& tickers,
                            const std::vector<GbmParams>& params, int t_steps,
                            std::uint64_t master_seed) {
    check_aligned(tickers.size(), params.size(), "noise walks params");

    Eigen::MatrixXd paths(t_steps, static_cast<Eigen::Index>(tickers.size()));
    parallel_for(static_cast<std::int64_t>(tickers.size()), [&](std::int64_t i) {
        const auto u = static_cast<std::size_t>(i);
        const std::uint64_t own = rng::derive_own_seed(master_seed, tickers[u], 'N');
        paths.col(static_cast<Eigen::Index>(i)) =
            simulate_gbm_corr(params[u], t_steps, CorrChannelConfig{}, own, master_seed);
    });
    return paths;
}

Eigen::VectorXd blend_walks(const std::vector<std::pair<double, Eigen::VectorXd>>& components) {
    if (components.empty()) throw DataError("blend needs at least one component");
    double wsum = 0.0;
    const Eigen::Index len = components.front().second.size();
    for (const auto& [w, path] : components) {
        if (w < 0.0) throw DataError("blend weights must be non-negative");
        if (path.size() != len) throw DataError("blend component lengths differ");
        wsum += w;
    }
    if (wsum <= 0.0) throw DataError("blend weights sum to zero");

    Eigen::VectorXd out = Eigen::VectorXd::Zero(len);
    for (const auto& [w, path] : components) out += (w / wsum) * path;
    return out;
}

WalkEnsemble generate_ensemble(const EnsembleConfig& config, std::uint64_t master_seed,
                               unsigned n_threads) {
    if (config.t_steps < 1) throw DataError("ensemble t_steps must be >= 1");
    if (config.stocks.empty()) throw DataError("ensemble has no stocks");
    const BlendWeights& w = config.weights;
    if (w.w_l < 0.0 || w.w_m < 0.0 || w.w_n < 0.0)
        throw DataError("blend weights must be non-negative");
    const double wsum = w.sum();
    if (wsum <= 0.0) throw DataError("blend weights sum to zero");

    WalkEnsemble ens;
    ens.config = config;
    ens.master_seed = master_seed;
    ens.tickers.reserve(config.stocks.size());
    for (const auto& s : config.stocks) ens.tickers.push_back(s.ticker);
    ens.paths.resize(config.t_steps, static_cast<Eigen::Index>(config.stocks.size()));

    parallel_for(
        static_cast<std::int64_t>(config.stocks.size()),
        [&](std::int64_t i) {
            const auto& plan = config.stocks[static_cast<std::size_t>(i)];
            Eigen::VectorXd blend = Eigen::VectorXd::Zero(config.t_steps);
            if (w.w_l > 0.0)
                blend += (w.w_l / wsum) *
                         simulate_gbm_corr(plan.params, config.t_steps, plan.community,
                                           rng::derive_own_seed(master_seed, plan.ticker, 'L'),
                                           master_seed, config.renormalize_blend);
            if (w.w_m > 0.0)
                blend += (w.w_m / wsum) *
                         simulate_gbm_corr(plan.params, config.t_steps, plan.market,
                                           rng::derive_own_seed(master_seed, plan.ticker, 'M'),
                                           master_seed, config.renormalize_blend);
            if (w.w_n > 0.0)
                blend += (w.w_n / wsum) *
                         simulate_gbm_corr(plan.params, config.t_steps, CorrChannelConfig{},
                                           rng::derive_own_seed(master_seed, plan.ticker, 'N'),
                                           master_seed, config.renormalize_blend);
            ens.paths.col(static_cast<Eigen::Index>(i)) = blend;
        },
        n_threads);
    return ens;
}

CorrMatrix simulated_correlation(const WalkEnsemble& ensemble) {
    if (ensemble.paths.rows() < 3)
        throw InsufficientDataError("simulated correlation needs >= 3 steps");
    ReturnPanel returns;
    returns.tickers = ensemble.tickers;
    returns.dates = synthetic_dates(static_cast<std::size_t>(ensemble.paths.rows()));
    returns.dates.erase(returns.dates.begin());
    const Eigen::Index t = ensemble.paths.rows() - 1;
    returns.returns = (ensemble.paths.bottomRows(t).array().log() -
                       ensemble.paths.topRows(t).array().log())
                          .matrix();
    return correlation_matrix(returns);
}

PricePanel ensemble_to_panel(const WalkEnsemble& ensemble) {
    PricePanel panel;
    panel.tickers = ensemble.tickers;
    panel.dates = synthetic_dates(static_cast<std::size_t>(ensemble.paths.rows()));
    panel.prices = ensemble.paths;
    return panel;
}

void to_json(nlohmann::json& j, const BlendWeights& w) {
    j = nlohmann::json{{"w_l", w.w_l}, {"w_m", w.w_m}, {"w_n", w.w_n}};
}

void from_json(const nlohmann::json& j, BlendWeights& w) {
    w.w_l = j.value("w_l", 0.0);
    w.w_m = j.value("w_m", 0.0);
    w.w_n = j.value("w_n", 0.0);
}

void to_json(nlohmann::json& j, const EnsembleConfig& c) {
    nlohmann::json stocks = nlohmann::json::array();
    for (const auto& s : c.stocks) {
        stocks.push_back({{"ticker", s.ticker},
                          {"s0", s.params.s0},
                          {"mu", s.params.mu},
                          {"sigma", s.params.sigma},
                          {"community_seed", s.community.seed},
                          {"community_c_eff", s.community.c_eff},
                          {"market_seed", s.market.seed},
                          {"market_c_eff", s.market.c_eff}});
    }
    j = nlohmann::json{{"stocks", std::move(stocks)},
                       {"weights", c.weights},
                       {"t_steps", c.t_steps},
                       {"renormalize_blend", c.renormalize_blend}};
}

void from_json(const nlohmann::json& j, EnsembleConfig& c) {
    c.stocks.clear();
    for (const auto& js : j.at("stocks")) {
        StockChannelPlan s;
        s.ticker = js.at("ticker").get<std::string>();
        s.params.s0 = js.at("s0").get<double>();
        s.params.mu = js.at("mu").get<double>();
        s.params.sigma = js.at("sigma").get<double>();
        s.community.seed = js.at("community_seed").get<std::uint64_t>();
        s.community.c_eff = js.at("community_c_eff").get<double>();
        s.market.seed = js.at("market_seed").get<std::uint64_t>();
        s.market.c_eff = js.at("market_c_eff").get<double>();
        c.stocks.push_back(std::move(s));
    }
    c.weights = j.at("weights").get<BlendWeights>();
    c.t_steps = j.at("t_steps").get<int>();
    c.renormalize_blend = j.value("renormalize_blend", false);
}

}  // namespace marketnet
