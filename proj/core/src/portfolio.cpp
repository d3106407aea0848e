#include "marketnet/portfolio.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <nlohmann/json.hpp>
#include <numeric>

#include "marketnet/csv.hpp"
#include "marketnet/errors.hpp"
#include "marketnet/pipeline.hpp"
#include "marketnet/rng.hpp"

namespace marketnet {
namespace {

constexpr double kConstraintTol = 1e-8;
constexpr double kMultiplierTol = 1e-10;

struct SolveAttempt {
    Eigen::VectorXd w;
    bool ok = false;
    double residual = 0.0;
    int iterations = 0;
};

// The corner putting all free mass on the best-excess asset maximizes the
// excess return over {sum w = 1, w >= mw}, so it doubles as the
// feasibility certificate.
Eigen::VectorXd best_corner(const Eigen::VectorXd& excess, double mw) {
    Eigen::Index k;
    excess.maxCoeff(&k);
    const Eigen::Index n = excess.size();
    Eigen::VectorXd w = Eigen::VectorXd::Constant(n, mw);
    w[k] += 1.0 - mw * static_cast<double>(n);
    return w;
}

// Primal active-set iteration for min 1/2 y'Cov y subject to excess'y = 1
// and y_i - mw sum(y) >= 0. Constraint gradients a_i = e_i - mw 1.
SolveAttempt solve_active_set(const Eigen::VectorXd& excess, const Eigen::MatrixXd& cov,
                              double mw) {
    const Eigen::Index n = excess.size();
    const int max_iter = 100 + 10 * static_cast<int>(n);

    const double ridge =
        1e-12 * std::max(cov.diagonal().mean(), std::numeric_limits<double>::min());
    Eigen::MatrixXd sigma = cov;
    sigma.diagonal().array() += ridge;

    const Eigen::VectorXd w0 = best_corner(excess, mw);
    const double corner_excess = excess.dot(w0);
    Eigen::VectorXd y = w0 / corner_excess;

    auto slack = [&](const Eigen::VectorXd& v, Eigen::Index i) {
        return v[i] - mw * v.sum();
    };

    std::vector<char> active(static_cast<std::size_t>(n), 0);
    for (Eigen::Index i = 0; i < n; ++i)
        if (std::abs(slack(y, i)) <= 1e-14 * std::max(1.0, y.cwiseAbs().maxCoeff()))
            active[static_cast<std::size_t>(i)] = 1;

    SolveAttempt out;
    for (int it = 0; it < max_iter; ++it) {
        out.iterations = it + 1;
        std::vector<Eigen::Index> act;
        for (Eigen::Index i = 0; i < n; ++i)
            if (active[static_cast<std::size_t>(i)]) act.push_back(i);

        // KKT system for the step p and multipliers (mu for active bounds,
        // nu for the excess equality).
        const Eigen::Index m = static_cast<Eigen::Index>(act.size());
        const Eigen::Index dim = n + m + 1;
        Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(dim, dim);
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dim);
        kkt.topLeftCorner(n, n) = sigma;
        for (Eigen::Index r = 0; r < m; ++r) {
            Eigen::VectorXd a = Eigen::VectorXd::Constant(n, -mw);
            a[act[static_cast<std::size_t>(r)]] += 1.0;
            kkt.block(n + r, 0, 1, n) = a.transpose();
            kkt.block(0, n + r, n, 1) = -a;
        }
        kkt.block(dim - 1, 0, 1, n) = excess.transpose();
        kkt.block(0, dim - 1, n, 1) = -excess;
        rhs.head(n) = -(sigma * y);

        Eigen::VectorXd sol = Eigen::PartialPivLU<Eigen::MatrixXd>(kkt).solve(rhs);
        if (!sol.allFinite()) return out;
        const Eigen::VectorXd p = sol.head(n);

        if (p.cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, y.cwiseAbs().maxCoeff())) {
            // Stationary on the working set; multipliers decide optimality.
            double worst = 0.0;
            Eigen::Index drop = -1;
            for (Eigen::Index r = 0; r < m; ++r) {
                const double mu = sol[n + r];
                if (mu < worst) {
                    worst = mu;
                    drop = act[static_cast<std::size_t>(r)];
                }
            }
            if (drop < 0 || worst >= -kMultiplierTol) {
                out.w = y;
                out.ok = true;
                return out;
            }
            active[static_cast<std::size_t>(drop)] = 0;
            continue;
        }

        // Step to the nearest blocking bound.
        double alpha = 1.0;
        Eigen::Index blocker = -1;
        const double p_sum = p.sum();
        for (Eigen::Index i = 0; i < n; ++i) {
            if (active[static_cast<std::size_t>(i)]) continue;
            const double ap = p[i] - mw * p_sum;
            if (ap >= -1e-14) continue;
            const double step = std::max(0.0, -slack(y, i) / ap);
            if (step < alpha) {
                alpha = step;
                blocker = i;
            }
        }
        y += alpha * p;
        if (blocker >= 0 && alpha < 1.0) active[static_cast<std::size_t>(blocker)] = 1;
        out.residual = p.cwiseAbs().maxCoeff();
    }
    return out;  // iteration limit
}

// Euclidean projection onto the unit simplex.
Eigen::VectorXd project_simplex(Eigen::VectorXd v) {
    const Eigen::Index n = v.size();
    std::vector<double> u(v.data(), v.data() + n);
    std::sort(u.begin(), u.end(), std::greater<double>());
    double css = 0.0, tau = 0.0;
    int rho = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        css += u[static_cast<std::size_t>(i)];
        const double t = (css - 1.0) / static_cast<double>(i + 1);
        if (u[static_cast<std::size_t>(i)] - t > 0.0) {
            rho = static_cast<int>(i + 1);
            tau = t;
        }
    }
    (void)rho;
    for (Eigen::Index i = 0; i < n; ++i) v[i] = std::max(v[i] - tau, 0.0);
    return v;
}

// Projected-gradient ascent on the Sharpe ratio over the simplex slice
// w = mw 1 + (1 - n mw) z, z in the unit simplex.
SolveAttempt solve_projected_gradient(const Eigen::VectorXd& excess, const Eigen::MatrixXd& cov,
                                      double mw) {
    const Eigen::Index n = excess.size();
    const double span = 1.0 - mw * static_cast<double>(n);
    SolveAttempt out;

    auto to_w = [&](const Eigen::VectorXd& z) {
        return (Eigen::VectorXd::Constant(n, mw) + span * z).eval();
    };
    auto sharpe = [&](const Eigen::VectorXd& w) {
        const double var = w.dot(cov * w);
        const double ex = excess.dot(w);
        if (var <= 0.0) return ex > 0.0 ? std::numeric_limits<double>::infinity()
                                        : -std::numeric_limits<double>::infinity();
        return ex / std::sqrt(var);
    };

    Eigen::VectorXd z = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
    double best = sharpe(to_w(z));
    if (std::isinf(best)) {
        out.w = to_w(z);
        out.ok = true;
        return out;
    }

    const int max_iter = 100 + 10 * static_cast<int>(n) + 2000;
    for (int it = 0; it < max_iter; ++it) {
        out.iterations = it + 1;
        const Eigen::VectorXd w = to_w(z);
        const double var = w.dot(cov * w);
        const double ex = excess.dot(w);
        if (var <= 0.0) break;
        const double vol = std::sqrt(var);
        // d sharpe / dw, chained through w = mw 1 + span z
        const Eigen::VectorXd grad =
            span * (excess / vol - (ex / (vol * vol * vol)) * (cov * w));

        double eta = 1.0 / std::max(1.0, grad.cwiseAbs().maxCoeff());
        bool improved = false;
        for (int h = 0; h < 40; ++h, eta /= 2.0) {
            const Eigen::VectorXd zc = project_simplex(z + eta * grad);
            const double s = sharpe(to_w(zc));
            if (s > best + 1e-14) {
                z = zc;
                best = s;
                improved = true;
                break;
            }
        }
        if (!improved) {
            out.w = to_w(z);
            out.ok = true;
            out.residual = grad.cwiseAbs().maxCoeff();
            return out;
        }
    }
    out.w = to_w(z);
    out.ok = true;
    return out;
}

bool weights_valid(const Eigen::VectorXd& w, double mw) {
    return w.allFinite() && std::abs(w.sum() - 1.0) <= kConstraintTol &&
           (w.array() >= mw - kConstraintTol).all();
}

// Mean simple returns and sample covariance of a window of prices.
void window_inputs(const Eigen::MatrixXd& prices, Eigen::VectorXd& mean_returns,
                   Eigen::MatrixXd& cov) {
    const Eigen::Index t = prices.rows() - 1;
    Eigen::MatrixXd simple =
        (prices.bottomRows(t).array() / prices.topRows(t).array() - 1.0).matrix();
    mean_returns = simple.colwise().mean();
    Eigen::MatrixXd centered = simple.rowwise() - mean_returns.transpose();
    cov = centered.transpose() * centered / static_cast<double>(t - 1);
}

}  // namespace

PortfolioWeights max_sharpe_weights(const Eigen::VectorXd& expected_returns,
                                    const Eigen::MatrixXd& cov, double r_f,
                                    double min_weight,
                                    const std::vector<std::string>& tickers) {
    const Eigen::Index n = expected_returns.size();
    if (n == 0) throw DataError("max_sharpe_weights on an empty universe");
    if (cov.rows() != n || cov.cols() != n)
        throw DataError("covariance dimensions do not match the return vector");
    if ((cov - cov.transpose()).cwiseAbs().maxCoeff() >
        1e-8 * std::max(1.0, cov.cwiseAbs().maxCoeff()))
        throw DataError("covariance matrix is not symmetric");
    if (min_weight < 0.0) throw DataError("min_weight must be >= 0");
    const double mass = min_weight * static_cast<double>(n);
    if (mass > 1.0 + 1e-12)
        throw InfeasibleError("min_weight " + std::to_string(min_weight) +
                              " infeasible for " + std::to_string(n) + " assets");
    if (!tickers.empty() && static_cast<Eigen::Index>(tickers.size()) != n)
        throw DataError("ticker list does not match the return vector");

    const Eigen::VectorXd excess = expected_returns.array() - r_f;

    PortfolioWeights out;
    out.tickers = tickers;

    if (std::abs(mass - 1.0) <= 1e-12) {
        // min_weight uses up the whole budget; the portfolio is forced.
        out.weights = Eigen::VectorXd::Constant(n, min_weight);
        if (excess.dot(out.weights) <= 0.0)
            throw InfeasibleError("no feasible portfolio beats the risk-free rate");
        return out;
    }

    if (excess.dot(best_corner(excess, min_weight)) <= 0.0)
        throw InfeasibleError("no feasible portfolio beats the risk-free rate");

    SolveAttempt attempt = solve_active_set(excess, cov, min_weight);
    Eigen::VectorXd w;
    bool solved = false;
    if (attempt.ok) {
        const double kappa = attempt.w.sum();
        if (kappa > 1e-12) {
            w = attempt.w / kappa;
            solved = weights_valid(w, min_weight);
        }
    }
    if (!solved) {
        SolveAttempt fallback = solve_projected_gradient(excess, cov, min_weight);
        if (fallback.ok && weights_valid(fallback.w, min_weight)) {
            w = fallback.w;
            solved = true;
        } else {
            throw ConvergenceError("max-Sharpe solver did not converge",
                                   std::max(attempt.residual, fallback.residual),
                                   attempt.iterations + fallback.iterations);
        }
    }

    // Clean off solver-tolerance dust so the constraints hold exactly enough
    // for downstream accounting.
    w = w.cwiseMax(min_weight);
    w /= w.sum();
    out.weights = std::move(w);
    return out;
}

PortfolioStats portfolio_stats(const Eigen::VectorXd& weights,
                               const Eigen::VectorXd& expected_returns,
                               const Eigen::MatrixXd& cov, double r_f) {
    if (weights.size() != expected_returns.size() || cov.rows() != weights.size() ||
        cov.cols() != weights.size())
        throw DataError("portfolio_stats dimensions disagree");

    PortfolioStats s;
    s.expected_return = weights.dot(expected_returns);
    s.volatility = std::sqrt(std::max(0.0, weights.dot(cov * weights)));
    const double ex = s.expected_return - r_f;
    s.sharpe = s.volatility > 0.0 ? ex / s.volatility
               : ex >= 0.0        ? std::numeric_limits<double>::infinity()
                                  : -std::numeric_limits<double>::infinity();
    return s;
}

BacktestReport backtest(const PricePanel& panel, int dt, StrategyKind strategy,
                        const BacktestConfig& config) {
    if (dt < 2) throw DataError("rebalance interval must be >= 2 days");
    const Eigen::Index t_rows = panel.n_dates();
    if (t_rows < 2 * static_cast<Eigen::Index>(dt) + 1)
        throw InsufficientDataError("panel spans " + std::to_string(t_rows) +
                                    " days, need at least " + std::to_string(2 * dt + 1));

    BacktestReport report;
    report.strategy = strategy == StrategyKind::historical ? "historical" : "simulated-market";
    report.dt = dt;
    report.run_seed = config.master_seed;

    const Eigen::Index n = panel.n_stocks();
    Eigen::VectorXd held = Eigen::VectorXd::Zero(n);  // cash until the first solve
    double cum = 1.0;
    std::uint64_t window_ordinal = 0;

    for (Eigen::Index t = dt; t + dt < t_rows; t += dt, ++window_ordinal) {
        const Eigen::MatrixXd window =
            panel.prices.block(t - dt, 0, static_cast<Eigen::Index>(dt) + 1, n);

        try {
            Eigen::VectorXd mean_returns;
            Eigen::MatrixXd cov;
            if (strategy == StrategyKind::historical) {
                window_inputs(window, mean_returns, cov);
            } else {
                EnsembleConfig ens_cfg;
                if (n == 1) {
                    // A one-stock universe has no network to analyze; the
                    // stock is its own market (full coupling, no community).
                    StockChannelPlan plan;
                    plan.ticker = panel.tickers[0];
                    plan.params = estimate_gbm_params(window.col(0));
                    plan.community = {0.0, kCommunitySeedOffset};
                    plan.market = {1.0, kMarketChannelSeed};
                    ens_cfg.stocks.push_back(std::move(plan));
                    ens_cfg.weights = config.sim_weights;
                    ens_cfg.t_steps = dt + 1;
                } else {
                    PricePanel window_panel;
                    window_panel.tickers = panel.tickers;
                    window_panel.dates.assign(
                        panel.dates.begin() + static_cast<std::ptrdiff_t>(t - dt),
                        panel.dates.begin() + static_cast<std::ptrdiff_t>(t + 1));
                    window_panel.prices = window;

                    AnalysisOptions opt;
                    opt.rho_c = config.sim_rho_c;
                    opt.top_fraction = config.sim_top_fraction;
                    opt.louvain_seed = config.sim_louvain_seed;
                    opt.q_counts_prices = config.sim_q_counts_prices;
                    const NetworkAnalysis analysis = analyze_panel(window_panel, opt);
                    ens_cfg = build_ensemble_config(analysis, window_panel,
                                                    config.sim_weights, dt + 1);
                }
                const std::uint64_t window_seed =
                    rng::splitmix64(config.master_seed ^ window_ordinal);
                const WalkEnsemble ens = generate_ensemble(ens_cfg, window_seed);

                // Ensemble mean log-return converted to a simple return;
                // covariance straight from the simulated simple returns.
                const Eigen::Index steps = ens.paths.rows() - 1;
                Eigen::MatrixXd logret = (ens.paths.bottomRows(steps).array().log() -
                                          ens.paths.topRows(steps).array().log())
                                             .matrix();
                mean_returns =
                    logret.colwise().mean().array().exp().matrix().transpose();
                mean_returns.array() -= 1.0;

                Eigen::MatrixXd simple = (ens.paths.bottomRows(steps).array() /
                                          ens.paths.topRows(steps).array() -
                                          1.0)
                                             .matrix();
                Eigen::MatrixXd centered = simple.rowwise() - simple.colwise().mean();
                cov = centered.transpose() * centered / static_cast<double>(steps - 1);
            }
            held = max_sharpe_weights(mean_returns, cov, config.r_f, config.min_weight,
                                      panel.tickers)
                       .weights;
        } catch (const std::exception& e) {
            report.solver_failures.push_back(panel.dates[static_cast<std::size_t>(t)] + ": " +
                                             e.what());
        }

        const Eigen::VectorXd asset_returns =
            (panel.prices.row(t + dt).array() / panel.prices.row(t).array() - 1.0)
                .matrix()
                .transpose();
        const double period = held.dot(asset_returns);
        cum *= 1.0 + period;

        report.decision_dates.push_back(panel.dates[static_cast<std::size_t>(t)]);
        report.period_end_dates.push_back(panel.dates[static_cast<std::size_t>(t + dt)]);
        report.period_returns.push_back(period);
        report.cum_returns.push_back(cum - 1.0);
    }
    return report;
}

ComparisonReport compare_strategies(const PricePanel& panel, const std::vector<int>& dt_values,
                                    int n_runs, const BacktestConfig& config) {
    if (n_runs < 1) throw DataError("n_runs must be >= 1");

    ComparisonReport report;
    report.n_runs = n_runs;
    for (int dt : dt_values) {
        DtComparison cmp;
        cmp.dt = dt;
        cmp.historical = backtest(panel, dt, StrategyKind::historical, config);
        cmp.historical_cum = cmp.historical.final_cum_return();

        cmp.simulated_min = std::numeric_limits<double>::infinity();
        cmp.simulated_max = -std::numeric_limits<double>::infinity();
        double acc = 0.0;
        for (int run = 0; run < n_runs; ++run) {
            BacktestConfig run_config = config;
            run_config.master_seed =
                rng::splitmix64(config.master_seed ^ (0x9E3779B97F4A7C15ULL *
                                                      static_cast<std::uint64_t>(run + 1)));
            cmp.simulated.push_back(
                backtest(panel, dt, StrategyKind::simulated_market, run_config));
            const double r = cmp.simulated.back().final_cum_return();
            acc += r;
            cmp.simulated_min = std::min(cmp.simulated_min, r);
            cmp.simulated_max = std::max(cmp.simulated_max, r);
        }
        cmp.simulated_mean = acc / static_cast<double>(n_runs);
        report.by_dt.push_back(std::move(cmp));
    }
    return report;
}

std::string comparison_to_csv(const DtComparison& cmp) {
    std::string out = "date,strategy,run,cum_return\n";
    auto emit = [&out](const BacktestReport& r, int run) {
        for (std::size_t k = 0; k < r.cum_returns.size(); ++k) {
            out += r.period_end_dates[k];
            out += ',';
            out += r.strategy;
            out += ',';
            out += std::to_string(run);
            out += ',';
            out += csv::format_double(r.cum_returns[k]);
            out += '\n';
        }
    };
    emit(cmp.historical, 0);
    for (std::size_t run = 0; run < cmp.simulated.size(); ++run)
        emit(cmp.simulated[run], static_cast<int>(run));
    return out;
}

void to_json(nlohmann::json& j, const BacktestReport& r) {
    j = nlohmann::json{{"strategy", r.strategy},
                       {"dt", r.dt},
                       {"run_seed", r.run_seed},
                       {"decision_dates", r.decision_dates},
                       {"period_end_dates", r.period_end_dates},
                       {"period_returns", r.period_returns},
                       {"cum_returns", r.cum_returns},
                       {"solver_failures", r.solver_failures},
                       {"final_cum_return", r.final_cum_return()}};
}

void to_json(nlohmann::json& j, const DtComparison& c) {
    j = nlohmann::json{{"dt", c.dt},
                       {"historical", c.historical},
                       {"simulated", c.simulated},
                       {"historical_cum", c.historical_cum},
                       {"simulated_mean", c.simulated_mean},
                       {"simulated_min", c.simulated_min},
                       {"simulated_max", c.simulated_max}};
}

void to_json(nlohmann::json& j, const ComparisonReport& c) {
    j = nlohmann::json{{"n_runs", c.n_runs}, {"by_dt", c.by_dt}};
}

}  // namespace marketnet
