#ifndef MARKETNET_PORTFOLIO_HPP
#define MARKETNET_PORTFOLIO_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <nlohmann/json_fwd.hpp>
#include <string>
#include <vector>

#include "marketnet/gbm.hpp"
#include "marketnet/market_data.hpp"

namespace marketnet {

/// Long-only portfolio on the simplex: weights >= min_weight, sum 1.
struct PortfolioWeights {
    std::vector<std::string> tickers;
    Eigen::VectorXd weights;
};

struct PortfolioStats {
    double expected_return = 0.0;
    double volatility = 0.0;
    double sharpe = 0.0;  // +/-inf sentinel when volatility is 0
};

/// Maximize (w'R - r_f) / sqrt(w' Cov w) over {sum w = 1, w >= min_weight}.
///
/// Solved through the standard scale substitution y = kappa w with
/// (R - r_f)'y = 1, which turns the ratio into the quadratic program
/// min 1/2 y'Cov y over a cone slice; a primal active-set iteration solves
/// the QP and a projected-gradient ascent on the simplex backs it up.
/// Throws InfeasibleError when no feasible portfolio beats r_f and
/// ConvergenceError when both solvers fail.
PortfolioWeights max_sharpe_weights(const Eigen::VectorXd& expected_returns,
                                    const Eigen::MatrixXd& cov, double r_f,
                                    double min_weight,
                                    const std::vector<std::string>& tickers = {});

PortfolioStats portfolio_stats(const Eigen::VectorXd& weights,
                               const Eigen::VectorXd& expected_returns,
                               const Eigen::MatrixXd& cov, double r_f);

enum class StrategyKind { historical, simulated_market };

/// Shared backtest settings. The sim_* fields drive the simulated-market
/// strategy and are ignored by the historical baseline.
struct BacktestConfig {
    double r_f = 0.0;
    double min_weight = 0.0005;
    std::uint64_t master_seed = 1;

    double sim_rho_c = 0.9;
    double sim_top_fraction = 0.03;
    std::uint64_t sim_louvain_seed = 7;
    BlendWeights sim_weights{0.26, 0.74, 0.0};  // community/market blend
    bool sim_q_counts_prices = false;
};

struct BacktestReport {
    std::string strategy;
    int dt = 0;
    std::uint64_t run_seed = 0;
    std::vector<std::string> decision_dates;    // weights computed here
    std::vector<std::string> period_end_dates;  // returns realized here
    std::vector<double> period_returns;
    std::vector<double> cum_returns;  // compounded to each period end
    std::vector<std::string> solver_failures;

    double final_cum_return() const { return cum_returns.empty() ? 0.0 : cum_returns.back(); }
};

/// Walk-forward loop: at every dt-th row, estimate inputs from the trailing
/// dt-day window (historical: arithmetic mean simple returns + sample
/// covariance; simulated-market: network + market-mode analysis of the
/// window, one market-blend GBM ensemble, ensemble mean returns +
/// covariance), solve max-Sharpe, hold for the next dt days. Solver or
/// analysis failures are recorded and the previous weights are held (cash
/// before the first success).
BacktestReport backtest(const PricePanel& panel, int dt, StrategyKind strategy,
                        const BacktestConfig& config);

struct DtComparison {
    int dt = 0;
    BacktestReport historical;
    std::vector<BacktestReport> simulated;  // one per run
    double historical_cum = 0.0;
    double simulated_mean = 0.0;
    double simulated_min = 0.0;
    double simulated_max = 0.0;
};

struct ComparisonReport {
    std::vector<DtComparison> by_dt;
    int n_runs = 0;
};

/// Both strategies at every dt; the simulated strategy repeats n_runs times
/// with master seeds derived from config.master_seed.
ComparisonReport compare_strategies(const PricePanel& panel, const std::vector<int>& dt_values,
                                    int n_runs, const BacktestConfig& config);

/// Cumulative-return curves as CSV `date,strategy,run,cum_return`
/// (historical is run 0).
std::string comparison_to_csv(const DtComparison& cmp);

void to_json(nlohmann::json& j, const BacktestReport& r);
void to_json(nlohmann::json& j, const DtComparison& c);
void to_json(nlohmann::json& j, const ComparisonReport& c);

}  // namespace marketnet

#endif  // MARKETNET_PORTFOLIO_HPP
