#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "marketnet/errors.hpp"
#include "marketnet/market_data.hpp"

using namespace marketnet;

namespace {

const char* kSmallCsv =
    "date,AAA,BBB,CCC\n"
    "2021-01-04,100,50,20\n"
    "2021-01-05,101,49.5,20.2\n"
    "2021-01-06,102.5,50.1,19.8\n"
    "2021-01-07,103,50.4,20.1\n";

PricePanel make_panel(const std::vector<std::string>& tickers, const Eigen::MatrixXd& prices) {
    PricePanel p;
    p.tickers = tickers;
    p.dates = synthetic_dates(static_cast<std::size_t>(prices.rows()));
    p.prices = prices;
    return p;
}

}  // namespace

TEST_CASE("well-formed panel csv parses to the right shape and values") {
    const PricePanel p = parse_price_panel(kSmallCsv);
    CHECK(p.n_dates() == 4);
    CHECK(p.n_stocks() == 3);
    CHECK(p.tickers == std::vector<std::string>{"AAA", "BBB", "CCC"});
    CHECK(p.dates.front() == "2021-01-04");
    CHECK(p.dates.back() == "2021-01-07");
    CHECK(p.prices(0, 0) == 100.0);
    CHECK(p.prices(1, 1) == 49.5);
    CHECK(p.prices(3, 2) == 20.1);
    CHECK(p.sector_of("AAA") == "UNKNOWN");
}

TEST_CASE("panel csv rejects bad input") {
    CHECK_THROWS_AS((void)parse_price_panel(""), FormatError);
    CHECK_THROWS_AS((void)parse_price_panel("day,AAA\n2021-01-04,1\n"), FormatError);
    CHECK_THROWS_AS((void)parse_price_panel("date,AAA\nnot-a-date,1\n"), FormatError);
    CHECK_THROWS_AS((void)parse_price_panel("date,AAA\n2021-01-05,1\n2021-01-04,2\n"), DataError);
    CHECK_THROWS_AS((void)parse_price_panel("date,AAA\n2021-01-04,1\n2021-01-04,2\n"), DataError);
    CHECK_THROWS_AS((void)parse_price_panel("date,AAA\n2021-01-04,1,2\n"), FormatError);

    // Non-positive price names the ticker and the date.
    try {
        (void)parse_price_panel("date,AAA,BBB\n2021-01-04,100,0\n");
        FAIL("expected DataError");
    } catch (const DataError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("BBB") != std::string::npos);
        CHECK(msg.find("2021-01-04") != std::string::npos);
    }
    CHECK_THROWS_AS((void)parse_price_panel("date,AAA\n2021-01-04,-3\n"), DataError);
}

TEST_CASE("panel csv round-trips through its writer") {
    const PricePanel p = parse_price_panel(kSmallCsv);
    const PricePanel q = parse_price_panel(panel_to_csv(p));
    CHECK(q.tickers == p.tickers);
    CHECK(q.dates == p.dates);
    CHECK(q.prices == p.prices);
}

TEST_CASE("missing cells parse as gaps and clean_universe drops them") {
    const char* csv =
        "date,AAA,BBB,CCC\n"
        "2021-01-04,100,,20\n"
        "2021-01-05,101,49.5,20.2\n";
    const PricePanel raw = parse_price_panel(csv);
    CHECK(std::isnan(raw.prices(0, 1)));

    const PricePanel clean = clean_universe(raw);
    CHECK(clean.tickers == std::vector<std::string>{"AAA", "CCC"});
    CHECK(clean.n_dates() == 2);
    CHECK(clean.prices(0, 1) == 20.0);

    // Idempotent, and the identity on gap-free panels.
    const PricePanel again = clean_universe(clean);
    CHECK(again.tickers == clean.tickers);
    CHECK(again.prices == clean.prices);

    const char* all_gaps = "date,AAA\n2021-01-04,\n";
    CHECK_THROWS_AS((void)clean_universe(parse_price_panel(all_gaps)), DataError);
}

TEST_CASE("sector csv attaches labels") {
    const auto sectors = parse_sector_csv("ticker,sector\nAAA,Energy\nBBB,Tech\n");
    PricePanel p = parse_price_panel(kSmallCsv);
    p.sectors = sectors;
    CHECK(p.sector_of("AAA") == "Energy");
    CHECK(p.sector_of("CCC") == "UNKNOWN");
    CHECK_THROWS_AS((void)parse_sector_csv("name,sector\nAAA,X\n"), FormatError);
}

TEST_CASE("log returns match element-wise recomputation") {
    const PricePanel p = parse_price_panel(kSmallCsv);
    const ReturnPanel r = log_returns(p);
    CHECK(r.n_obs() == 3);
    CHECK(r.n_stocks() == 3);
    CHECK(r.dates.size() == 3);
    CHECK(r.dates.front() == "2021-01-05");
    for (Eigen::Index t = 0; t < r.n_obs(); ++t)
        for (Eigen::Index i = 0; i < r.n_stocks(); ++i)
            CHECK(r.returns(t, i) ==
                  doctest::Approx(std::log(p.prices(t + 1, i)) - std::log(p.prices(t, i)))
                      .epsilon(1e-15));

    // Constant series: all-zero returns. Ratio e: return exactly 1.
    Eigen::MatrixXd prices(3, 2);
    prices << 100.0, 100.0, 100.0, 100.0 * std::exp(1.0), 100.0, 100.0 * std::exp(2.0);
    const ReturnPanel rr = log_returns(make_panel({"K", "E"}, prices));
    CHECK(rr.returns.col(0).cwiseAbs().maxCoeff() == 0.0);
    CHECK(rr.returns(0, 1) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(rr.returns(1, 1) == doctest::Approx(1.0).epsilon(1e-15));

    Eigen::MatrixXd one_row(1, 1);
    one_row << 100.0;
    CHECK_THROWS_AS((void)log_returns(make_panel({"A"}, one_row)), InsufficientDataError);
}

TEST_CASE("returns plus cumulative exponentiation reconstruct prices") {
    std::mt19937_64 gen(99);
    std::normal_distribution<double> normal(0.0, 0.02);
    Eigen::MatrixXd prices(40, 3);
    for (Eigen::Index i = 0; i < 3; ++i) {
        prices(0, i) = 50.0 + 25.0 * static_cast<double>(i);
        for (Eigen::Index t = 1; t < 40; ++t)
            prices(t, i) = prices(t - 1, i) * std::exp(normal(gen));
    }
    const PricePanel p = make_panel({"A", "B", "C"}, prices);
    const ReturnPanel r = log_returns(p);
    for (Eigen::Index i = 0; i < 3; ++i) {
        double log_p = std::log(prices(0, i));
        for (Eigen::Index t = 0; t < r.n_obs(); ++t) {
            log_p += r.returns(t, i);
            CHECK(std::exp(log_p) == doctest::Approx(prices(t + 1, i)).epsilon(1e-12));
        }
    }
}

TEST_CASE("GBM estimation nails deterministic series") {
    // P(t) = 100 e^{0.01 t}: constant log-return, so sigma = 0 and mu = 0.01.
    Eigen::VectorXd prices(6);
    for (int t = 0; t < 6; ++t) prices(t) = 100.0 * std::exp(0.01 * t);
    const GbmParams g = estimate_gbm_params(prices);
    CHECK(g.sigma < 1e-12);  // exp() rounding leaves ulp-level dust
    CHECK(g.mu == doctest::Approx(0.01).epsilon(1e-12));
    CHECK(g.s0 == doctest::Approx(prices(5)).epsilon(1e-15));

    Eigen::VectorXd two(2);
    two << 100.0, 110.0;
    const GbmParams h = estimate_gbm_params(two);
    CHECK(h.sigma == 0.0);
    CHECK(h.mu == doctest::Approx(std::log(1.1)).epsilon(1e-15));
    CHECK(h.s0 == 110.0);

    Eigen::VectorXd one(1);
    one << 100.0;
    CHECK_THROWS_AS((void)estimate_gbm_params(one), InsufficientDataError);
}

TEST_CASE("GBM estimation recovers known parameters within standard errors") {
    // 250 returns with mu = 0.0005, sigma = 0.02. For n normal log-returns,
    // SE(mean) = sigma/sqrt(n) and SE(sigma-hat) ~= sigma/sqrt(2(n-1)); the
    // mu estimator adds back sigma^2/2, a shift much smaller than 3 SE.
    const double mu = 0.0005, sigma = 0.02;
    const int n = 250;
    const double se_mu = sigma / std::sqrt(static_cast<double>(n));
    const double se_sigma = sigma / std::sqrt(2.0 * (n - 1));
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        std::mt19937_64 gen(seed);
        std::normal_distribution<double> step(mu - sigma * sigma / 2.0, sigma);
        Eigen::VectorXd prices(n + 1);
        prices(0) = 100.0;
        for (int t = 1; t <= n; ++t) prices(t) = prices(t - 1) * std::exp(step(gen));
        const GbmParams g = estimate_gbm_params(prices);
        CHECK(std::fabs(g.mu - mu) < 3.0 * se_mu);
        CHECK(std::fabs(g.sigma - sigma) < 3.0 * se_sigma);

        // Scaling prices leaves mu and sigma alone; only s0 scales.
        const GbmParams h = estimate_gbm_params((7.0 * prices).eval());
        CHECK(h.mu == doctest::Approx(g.mu).epsilon(1e-12));
        CHECK(h.sigma == doctest::Approx(g.sigma).epsilon(1e-12));
        CHECK(h.s0 == doctest::Approx(7.0 * g.s0).epsilon(1e-12));
    }
}

TEST_CASE("windowed estimation slices rows inclusively") {
    Eigen::MatrixXd prices(5, 2);
    prices << 100, 10, 110, 11, 121, 12.1, 133.1, 13.31, 146.41, 14.641;
    const PricePanel p = make_panel({"A", "B"}, prices);
    const auto all = estimate_gbm_params_all(p, 1, 3);
    CHECK(all.size() == 2);
    CHECK(all[0].s0 == doctest::Approx(133.1).epsilon(1e-15));
    CHECK(all[0].mu == doctest::Approx(std::log(1.1)).epsilon(1e-12));
    CHECK(all[0].sigma == doctest::Approx(0.0).epsilon(1e-12));
    CHECK_THROWS_AS((void)estimate_gbm_params_all(p, 3, 3), InsufficientDataError);
    CHECK_THROWS_AS((void)estimate_gbm_params_all(p, 2, 7), DataError);
}

TEST_CASE("synthetic dates are strictly increasing ISO dates") {
    const auto dates = synthetic_dates(400);
    CHECK(dates.size() == 400);
    CHECK(dates.front() == "2000-01-03");
    for (std::size_t i = 1; i < dates.size(); ++i) CHECK(dates[i - 1] < dates[i]);
    // Feeding them through the parser proves format validity.
    std::string csv = "date,AAA\n";
    for (const auto& d : dates) csv += d + ",1\n";
    CHECK(parse_price_panel(csv).n_dates() == 400);
}

TEST_CASE("price source hook feeds the loader") {
    const PriceSource source = [](const std::vector<std::string>&, const std::string&,
                                  const std::string&) { return std::string(kSmallCsv); };
    const PricePanel p = load_price_panel_from_source(source, {"AAA", "BBB", "CCC"},
                                                      "2021-01-04", "2021-01-07");
    CHECK(p.n_stocks() == 3);
    CHECK(p.n_dates() == 4);
}
