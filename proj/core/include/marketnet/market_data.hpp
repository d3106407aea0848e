#ifndef MARKETNET_MARKET_DATA_HPP
#define MARKETNET_MARKET_DATA_HPP

#include <Eigen/Dense>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace marketnet {

/// Date-aligned closing prices for a stock universe.
///
/// Rows are trading dates (ISO-8601, strictly increasing), columns are
/// tickers in file order. A freshly loaded panel may contain NaN cells for
/// missing quotes; clean_universe() removes every ticker that has any.
/// After cleaning, all prices are finite and strictly positive.
struct PricePanel {
    std::vector<std::string> tickers;
    std::vector<std::string> dates;
    Eigen::MatrixXd prices;  // n_dates() x n_stocks()
    std::map<std::string, std::string> sectors;

    Eigen::Index n_dates() const { return prices.rows(); }
    Eigen::Index n_stocks() const { return prices.cols(); }

    /// Sector label for a ticker; "UNKNOWN" when no mapping was supplied.
    std::string sector_of(const std::string& ticker) const;
};

/// Daily log-returns: returns(t, i) = log(prices(t+1, i)) - log(prices(t, i)).
/// dates[t] is the later date of the pair.
struct ReturnPanel {
    std::vector<std::string> tickers;
    std::vector<std::string> dates;
    Eigen::MatrixXd returns;  // (T_days - 1) x n_stocks

    Eigen::Index n_obs() const { return returns.rows(); }
    Eigen::Index n_stocks() const { return returns.cols(); }
};

/// Per-stock GBM parameters estimated from history. dt is one trading day:
/// mu is drift per day, sigma volatility per sqrt-day.
struct GbmParams {
    double s0 = 0.0;
    double mu = 0.0;
    double sigma = 0.0;
};

/// Hook for attaching a price downloader without changing the core: given a
/// universe and an inclusive ISO date range, return panel-CSV bytes.
using PriceSource = std::function<std::string(const std::vector<std::string>& universe,
                                              const std::string& start_date,
                                              const std::string& end_date)>;

/// Parse panel-CSV text: header "date,<ticker>,...", one row per date,
/// cells are closing prices. Empty/NaN cells mark missing quotes.
/// Throws FormatError (with row/column) on parse failures and DataError on
/// non-positive prices or non-increasing dates.
PricePanel parse_price_panel(std::string_view csv_text);

PricePanel load_price_panel(const std::filesystem::path& price_csv,
                            const std::optional<std::filesystem::path>& sector_csv = {});

PricePanel load_price_panel_from_source(const PriceSource& source,
                                        const std::vector<std::string>& universe,
                                        const std::string& start_date,
                                        const std::string& end_date,
                                        const std::optional<std::filesystem::path>& sector_csv = {});

/// sector-CSV: header "ticker,sector", one mapping per row.
std::map<std::string, std::string> load_sector_csv(const std::filesystem::path& path);
std::map<std::string, std::string> parse_sector_csv(std::string_view csv_text);

/// Drop every ticker with a missing price anywhere in the date range.
/// Idempotent. Throws DataError("no complete tickers") if nothing survives.
PricePanel clean_universe(const PricePanel& panel);

/// Throws InsufficientDataError when the panel has fewer than 2 dates.
ReturnPanel log_returns(const PricePanel& panel);

/// Estimate (s0, mu, sigma) over a price window with dt = 1 day:
///   s0    = last price of the window
///   sigma = sample standard deviation of the window's daily log-returns
///   mu    = mean daily log-return + sigma^2/2
/// so the GBM log-drift mu - sigma^2/2 reproduces the observed mean
/// log-return. Throws InsufficientDataError for windows of fewer than 2
/// prices; a single return gives sigma = 0.
GbmParams estimate_gbm_params(const Eigen::Ref<const Eigen::VectorXd>& window_prices);

/// GbmParams for every stock over a row range [first_row, last_row] of the
/// panel (inclusive).
std::vector<GbmParams> estimate_gbm_params_all(const PricePanel& panel,
                                               Eigen::Index first_row,
                                               Eigen::Index last_row);

/// Serialize a panel back to panel-CSV (the same contract parse accepts).
std::string panel_to_csv(const PricePanel& panel);
void write_panel_csv(const PricePanel& panel, const std::filesystem::path& path);

/// Consecutive synthetic ISO dates starting at 2000-01-03 (calendar days),
/// for exporting simulated panels that have no natural date axis.
std::vector<std::string> synthetic_dates(std::size_t count);

}  // namespace marketnet

#endif  // MARKETNET_MARKET_DATA_HPP
