// Micro-benchmarks for the hot paths: correlation estimation, the dense
// eigensolve, community detection, ensemble generation and the Sharpe QP.
// Sizes bracket the intended desk scale (a few hundred tickers, ~2y daily).

#include <benchmark/benchmark.h>

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "marketnet/corrnet.hpp"
#include "marketnet/gbm.hpp"
#include "marketnet/market_data.hpp"
#include "marketnet/portfolio.hpp"
#include "marketnet/spectral.hpp"

namespace {

using namespace marketnet;

std::vector<std::string> make_tickers(int n) {
    std::vector<std::string> t;
    t.reserve(n);
    for (int i = 0; i < n; ++i) t.push_back("S" + std::to_string(1000 + i));
    return t;
}

// One common factor plus idiosyncratic noise so the spectrum has a real
// top mode and the threshold graph is non-trivial.
ReturnPanel factor_returns(int n, int t, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXd factor(t);
    for (int k = 0; k < t; ++k) factor(k) = normal(rng);
    Eigen::MatrixXd r(t, n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < t; ++k) r(k, j) = 0.8 * factor(k) + 0.6 * normal(rng);
    ReturnPanel panel;
    panel.tickers = make_tickers(n);
    panel.returns = 0.01 * r;
    return panel;
}

StockGraph random_graph(int n, double p, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    StockGraph g;
    g.nodes = make_tickers(n);
    g.rho_c = 0.9;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (unit(rng) < p) g.edges.push_back({i, j, 0.9 + 0.1 * unit(rng)});
    return g;
}

EnsembleConfig ensemble_config(int n, int t_steps) {
    EnsembleConfig config;
    config.weights = {0.2, 0.3, 0.5};
    config.t_steps = t_steps;
    for (const std::string& ticker : make_tickers(n)) {
        StockChannelPlan plan;
        plan.ticker = ticker;
        plan.params = {100.0, 1e-4, 0.02};
        plan.community = {0.5, kCommunitySeedOffset + static_cast<std::uint64_t>(ticker.back() % 4)};
        plan.market = {0.7, kMarketChannelSeed};
        config.stocks.push_back(std::move(plan));
    }
    return config;
}

void bm_correlation_matrix(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const ReturnPanel panel = factor_returns(n, 504, 11);
    for (auto _ : state) {
        CorrMatrix c = correlation_matrix(panel);
        benchmark::DoNotOptimize(c.values.data());
    }
}

void bm_eigendecompose(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const CorrMatrix corr = correlation_matrix(factor_returns(n, 504, 12));
    for (auto _ : state) {
        SpectralSplit split = eigendecompose(corr);
        benchmark::DoNotOptimize(split.eigenvalues.data());
    }
}

void bm_louvain(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const StockGraph g = random_graph(n, 0.05, 13);
    for (auto _ : state) {
        std::vector<int> labels = louvain_labels(g, 7);
        benchmark::DoNotOptimize(labels.data());
    }
}

void bm_generate_ensemble(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const EnsembleConfig config = ensemble_config(n, 252);
    for (auto _ : state) {
        WalkEnsemble e = generate_ensemble(config, 1);
        benchmark::DoNotOptimize(e.paths.data());
    }
}

void bm_max_sharpe(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    std::mt19937_64 rng(14);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd a(n, 2 * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < 2 * n; ++j) a(i, j) = normal(rng);
    Eigen::MatrixXd cov = (a * a.transpose()) / (2.0 * n) * 0.0004;
    Eigen::VectorXd mu(n);
    for (int i = 0; i < n; ++i) mu(i) = 0.0002 + 0.0005 * std::abs(normal(rng));
    for (auto _ : state) {
        PortfolioWeights w = max_sharpe_weights(mu, cov, 0.0, 0.0005);
        benchmark::DoNotOptimize(w.weights.data());
    }
}

BENCHMARK(bm_correlation_matrix)->Arg(100)->Arg(250)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_eigendecompose)->Arg(100)->Arg(250)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_louvain)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_generate_ensemble)->Arg(20)->Arg(50)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_max_sharpe)->Arg(10)->Arg(50)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
