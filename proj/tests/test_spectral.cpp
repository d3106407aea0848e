#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "marketnet/corrnet.hpp"
#include "marketnet/errors.hpp"
#include "marketnet/spectral.hpp"

using namespace marketnet;

namespace {

std::vector<std::string> tickers(int n) {
    std::vector<std::string> t;
    for (int i = 0; i < n; ++i) t.push_back("S" + std::to_string(100 + i));
    return t;
}

CorrMatrix random_corr(int n, int t, std::uint64_t seed, double factor_load) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    ReturnPanel panel;
    panel.tickers = tickers(n);
    panel.returns.resize(t, n);
    Eigen::VectorXd factor(t);
    for (int k = 0; k < t; ++k) factor(k) = normal(gen);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < t; ++k)
            panel.returns(k, j) = factor_load * factor(k) + normal(gen);
    return correlation_matrix(panel);
}

// Simpson quadrature of f over [a, b] with the integrable square-root edge
// singularities removed by lambda = a + (b - a) sin^2(theta).
template <typename F>
double edge_free_integral(F f, double a, double b, int panels) {
    const double half_pi = std::asin(1.0);
    auto g = [&](double theta) {
        const double s = std::sin(theta), c = std::cos(theta);
        const double lambda = a + (b - a) * s * s;
        return f(lambda) * (b - a) * 2.0 * s * c;
    };
    const double h = half_pi / panels;
    double sum = g(0.0) + g(half_pi);
    for (int k = 1; k < panels; ++k) sum += g(k * h) * (k % 2 == 1 ? 4.0 : 2.0);
    return sum * h / 3.0;
}

}  // namespace

TEST_CASE("MP support edges follow the closed form") {
    const auto [lo, hi] = mp_edges(1.0, 1.0);
    CHECK(lo == 0.0);
    CHECK(hi == 4.0);

    const auto [lo4, hi4] = mp_edges(4.0, 1.0);
    CHECK(lo4 == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(hi4 == doctest::Approx(2.25).epsilon(1e-14));

    // sigma2 is a pure scale.
    const auto [slo, shi] = mp_edges(4.0, 0.5);
    CHECK(slo == doctest::Approx(0.5 * lo4).epsilon(1e-14));
    CHECK(shi == doctest::Approx(0.5 * hi4).epsilon(1e-14));

    CHECK_THROWS_AS((void)mp_edges(0.0, 1.0), DataError);
    CHECK_THROWS_AS((void)mp_edges(2.0, -1.0), DataError);
}

TEST_CASE("MP density integrates to one with mean sigma2") {
    for (double q : {1.0, 2.0, 2.594, 4.0}) {
        for (double s2 : {1.0, 0.58}) {
            const MpParams p = mp_params(q, s2);
            // Away from the q = 1 hard edge at 0 the density is smooth; the
            // sin^2 substitution handles the edges in both cases.
            const double mass =
                edge_free_integral([&](double l) { return mp_density(l, p); },
                                   p.lambda_minus, p.lambda_plus, 2000);
            const double mean =
                edge_free_integral([&](double l) { return l * mp_density(l, p); },
                                   p.lambda_minus, p.lambda_plus, 2000);
            CHECK(mass == doctest::Approx(1.0).epsilon(1e-3));
            CHECK(mean == doctest::Approx(s2).epsilon(1e-3));
        }
    }
}

TEST_CASE("MP density vanishes off the support") {
    const MpParams p = mp_params(4.0, 1.0);
    CHECK(mp_density(0.2, p) == 0.0);
    CHECK(mp_density(2.4, p) == 0.0);
    CHECK(mp_density(-1.0, p) == 0.0);
    CHECK(mp_density(1.0, p) > 0.0);
}

TEST_CASE("rescaled variance removes the market share") {
    CHECK(rescaled_sigma2(203.87, 485) == doctest::Approx(1.0 - 203.87 / 485.0).epsilon(1e-14));
    CHECK_THROWS_AS((void)rescaled_sigma2(485.0, 485), DataError);
    CHECK_THROWS_AS((void)rescaled_sigma2(-1.0, 485), DataError);
}

TEST_CASE("two-by-two eigendecomposition in closed form") {
    CorrMatrix c;
    c.tickers = {"A", "B"};
    c.values.resize(2, 2);
    c.values << 1.0, 0.6, 0.6, 1.0;
    const SpectralSplit s = eigendecompose(c);
    CHECK(s.eigenvalues(0) == doctest::Approx(1.6).epsilon(1e-14));
    CHECK(s.eigenvalues(1) == doctest::Approx(0.4).epsilon(1e-14));
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(std::fabs(s.eigenvectors(0, 0)) == doctest::Approx(r).epsilon(1e-14));
    CHECK(std::fabs(s.eigenvectors(1, 0)) == doctest::Approx(r).epsilon(1e-14));
    CHECK(s.eigenvectors(0, 0) * s.eigenvectors(1, 0) > 0.0);  // top mode: same sign
    CHECK(s.eigenvectors(0, 1) * s.eigenvectors(1, 1) < 0.0);

    // Top-mode projection is 0.8 * ones.
    const Eigen::MatrixXd m = mode_projection(s, {0});
    CHECK(m(0, 0) == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(m(0, 1) == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(m(1, 1) == doctest::Approx(0.8).epsilon(1e-12));

    CorrMatrix bad = c;
    bad.values(0, 1) = 0.2;
    CHECK_THROWS_AS((void)eigendecompose(bad), DataError);
}

TEST_CASE("eigendecomposition invariants on random correlation matrices") {
    for (std::uint64_t seed : {11ULL, 12ULL, 13ULL}) {
        const CorrMatrix c = random_corr(15, 80, seed, 0.8);
        const SpectralSplit s = eigendecompose(c);
        const int n = static_cast<int>(s.size());

        for (int i = 1; i < n; ++i) CHECK(s.eigenvalues(i - 1) >= s.eigenvalues(i));
        CHECK(s.eigenvalues.sum() == doctest::Approx(n).epsilon(1e-6 / n));
        CHECK((s.eigenvectors.transpose() * s.eigenvectors -
               Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-8);
        const Eigen::MatrixXd rec = s.eigenvectors *
                                    s.eigenvalues.asDiagonal() *
                                    s.eigenvectors.transpose();
        CHECK((rec - c.values).cwiseAbs().maxCoeff() < 1e-8);

        // The sign convention pins each column: rerunning gives bit-equal
        // vectors, not arbitrary flips.
        const SpectralSplit s2 = eigendecompose(c);
        CHECK(s.eigenvectors == s2.eigenvectors);
    }
}

TEST_CASE("complementary mode projections reassemble the matrix exactly") {
    for (int n : {5, 20}) {
        const CorrMatrix c = random_corr(n, 6 * n, 100 + n, 0.6);
        const SpectralSplit s = eigendecompose(c);
        for (int k : {1, 2, n / 2}) {
            std::vector<int> top(k), rest;
            std::iota(top.begin(), top.end(), 0);
            for (int i = k; i < n; ++i) rest.push_back(i);
            const Eigen::MatrixXd sum = mode_projection(s, top) + mode_projection(s, rest);
            CHECK((sum - c.values).cwiseAbs().maxCoeff() < 1e-8);
        }
        CHECK_THROWS_AS((void)mode_projection(s, {n}), DataError);
        CHECK_THROWS_AS((void)mode_projection(s, {-1}), DataError);
    }
}

TEST_CASE("rescaling restores a unit diagonal and flags dead rows") {
    Eigen::MatrixXd m(3, 3);
    m << 4.0, 3.0, 0.0,
         3.0, 9.0, 0.0,
         0.0, 0.0, 0.0;
    const RescaledCorr r = rescale_correlation(m, {"A", "B", "C"});
    CHECK(r.defined == std::vector<bool>{true, true, false});
    CHECK(r.values(0, 0) == 1.0);
    CHECK(r.values(1, 1) == 1.0);
    CHECK(r.values(0, 1) == doctest::Approx(3.0 / 6.0).epsilon(1e-14));
    CHECK(r.values(2, 2) == 0.0);

    // Off-diagonal list only spans defined rows: the single (A,B) entry.
    const auto off = r.offdiagonal();
    REQUIRE(off.size() == 1);
    CHECK(off[0] == doctest::Approx(0.5).epsilon(1e-14));

    // On a projection of a true correlation matrix the entries stay in
    // [-1, 1] and the diagonal returns to exactly 1.
    const CorrMatrix c = random_corr(10, 60, 19, 0.8);
    const SpectralSplit s = eigendecompose(c);
    const Eigen::MatrixXd market = mode_projection(s, {0, 1});
    const RescaledCorr rs = rescale_correlation(market, c.tickers);
    for (int i = 0; i < 10; ++i) {
        if (!rs.defined[i]) continue;
        CHECK(rs.values(i, i) == 1.0);
        for (int j = 0; j < 10; ++j) {
            CHECK(rs.values(i, j) >= -1.0 - 1e-12);
            CHECK(rs.values(i, j) <= 1.0 + 1e-12);
        }
    }
}

TEST_CASE("market mode selection intersects the two influence rankings") {
    // 6 nodes; top_fraction 0.5 keeps ceil(3) per ranking.
    // eigencentrality top-3: E, D, C. pagerank top-3: E, D, A.
    // Intersection {D, E}; n_market = 2.
    std::vector<NodeStats> stats;
    const char* names[] = {"A", "B", "C", "D", "E", "F"};
    const double cent[] = {0.10, 0.05, 0.30, 0.40, 0.50, 0.01};
    const double pr[] = {0.30, 0.05, 0.10, 0.35, 0.40, 0.01};
    for (int i = 0; i < 6; ++i) {
        NodeStats s;
        s.ticker = names[i];
        s.eigencentrality = cent[i];
        s.pagerank = pr[i];
        stats.push_back(s);
    }

    SpectralSplit split;
    split.tickers = {"A", "B", "C", "D", "E", "F"};
    split.eigenvalues.resize(6);
    split.eigenvalues << 3.0, 1.2, 0.6, 0.5, 0.4, 0.3;
    split.eigenvectors = Eigen::MatrixXd::Identity(6, 6);

    MpParams mp = mp_params(4.0, 1.0);  // lambda_plus = 2.25 < 3.0... but 1.2 < 2.25
    // With n_market = 2 the second eigenvalue 1.2 sits below lambda_plus:
    // the selection must refuse.
    CHECK_THROWS_AS((void)select_market_modes(split, stats, mp, 0.5), DataError);

    split.eigenvalues << 5.0, 2.5, 0.6, 0.5, 0.4, 0.3;
    const MarketSelection sel = select_market_modes(split, stats, mp, 0.5);
    CHECK(sel.market_tickers == std::vector<std::string>{"D", "E"});
    CHECK(sel.split.n_market == 2);
    CHECK(sel.split.market_indices == std::vector<int>{0, 1});
    CHECK(sel.split.noise_indices() == std::vector<int>{2, 3, 4, 5});

    // Disjoint rankings: no influential stocks.
    for (int i = 0; i < 6; ++i) stats[i].pagerank = (i < 3) ? 0.4 : 0.01;
    for (int i = 0; i < 6; ++i) stats[i].eigencentrality = (i < 3) ? 0.01 : 0.4;
    CHECK_THROWS_AS((void)select_market_modes(split, stats, mp, 0.34), DataError);
}

TEST_CASE("selection cut uses ceil and breaks ties by ticker") {
    // 5 nodes, top_fraction 0.5 -> ceil(2.5) = 3 per ranking. B and C tie on
    // both statistics; the cut prefers the lexicographically earlier B.
    std::vector<NodeStats> stats;
    const char* names[] = {"A", "B", "C", "D", "E"};
    const double cent[] = {0.9, 0.5, 0.5, 0.8, 0.1};
    for (int i = 0; i < 5; ++i) {
        NodeStats s;
        s.ticker = names[i];
        s.eigencentrality = cent[i];
        s.pagerank = cent[i];
        stats.push_back(s);
    }
    SpectralSplit split;
    split.tickers = {"A", "B", "C", "D", "E"};
    split.eigenvalues.resize(5);
    split.eigenvalues << 9.0, 8.0, 7.0, 0.4, 0.3;
    split.eigenvectors = Eigen::MatrixXd::Identity(5, 5);
    const MarketSelection sel = select_market_modes(split, stats, mp_params(4.0, 1.0), 0.5);
    CHECK(sel.market_tickers == std::vector<std::string>{"A", "B", "D"});
    CHECK(sel.split.n_market == 3);
}

TEST_CASE("histograms cover the range with clamping") {
    const Histogram h = histogram({-2.0, -0.5, 0.0, 0.5, 0.5, 2.0}, 4, -1.0, 1.0);
    REQUIRE(h.edges.size() == 5);
    REQUIRE(h.counts.size() == 4);
    CHECK(h.edges.front() == -1.0);
    CHECK(h.edges.back() == 1.0);
    CHECK(h.counts[0] == 1);  // -2 clamped into the first bin
    CHECK(h.counts[1] == 1);  // -0.5 sits on an edge; half-open bins send it right
    CHECK(h.counts[2] == 1);  // 0.0
    CHECK(h.counts[3] == 3);  // both 0.5 and the clamped 2.0
    CHECK(std::accumulate(h.counts.begin(), h.counts.end(), 0) == 6);

    const Histogram auto_h = histogram({1.0, 2.0, 3.0}, 2);
    CHECK(auto_h.edges.front() == 1.0);
    CHECK(auto_h.edges.back() == 3.0);
    CHECK(auto_h.counts[0] == 1);
    CHECK(auto_h.counts[1] == 2);  // right edge closes the last bin

    const Histogram flat = histogram({5.0, 5.0}, 3);
    CHECK(flat.edges.front() < 5.0);
    CHECK(flat.edges.back() > 5.0);
    CHECK(std::accumulate(flat.counts.begin(), flat.counts.end(), 0) == 2);
}

TEST_CASE("csv exports carry the full spectrum") {
    const CorrMatrix c = random_corr(6, 40, 23, 0.7);
    SpectralSplit s = eigendecompose(c);
    s.market_indices = {0};
    s.n_market = 1;

    const std::string spec_csv = spectrum_to_csv(s);
    CHECK(std::count(spec_csv.begin(), spec_csv.end(), '\n') == 7);  // header + 6 rows
    CHECK(spec_csv.rfind("index,eigenvalue,is_market", 0) == 0);

    const SpectrumHistogram sh = eigenvalue_histogram(s, 10, mp_params(4.0, 1.0),
                                                      mp_params(4.0, 0.6));
    const std::string overlay = spectrum_histogram_to_csv(sh);
    CHECK(overlay.find("bin_left,bin_right,count") == 0);
    CHECK(overlay.find("lambda,density_raw,density_rescaled") != std::string::npos);
}

TEST_CASE("histogram boundary semantics match the bin edges") {
    // -0.5 lies exactly on the edge between bins 0 and 1: half-open bins put
    // it in bin 1; the value list in the clamping test relies on this.
    const Histogram h = histogram({-0.5}, 4, -1.0, 1.0);
    CHECK(h.counts[1] == 1);
}
