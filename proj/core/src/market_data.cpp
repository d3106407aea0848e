#include "marketnet/market_data.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>

#include "marketnet/csv.hpp"
#include "marketnet/errors.hpp"

namespace marketnet {
namespace {

bool valid_iso_date(const std::string& s) {
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
    for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u})
        if (s[i] < '0' || s[i] > '9') return false;
    return true;
}

// Days since 1970-01-01 -> (y, m, d). Proleptic Gregorian calendar,
// era-based conversion.
void civil_from_days(std::int64_t z, int& y, unsigned& m, unsigned& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t yy = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = doy - (153 * mp + 2) / 5 + 1;
    m = mp < 10 ? mp + 3 : mp - 9;
    y = static_cast<int>(yy + (m <= 2));
}

std::int64_t days_from_civil(int y, unsigned m, unsigned d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m > 2 ? m - 3 : m + 9) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

}  // namespace

std::string PricePanel::sector_of(const std::string& ticker) const {
    auto it = sectors.find(ticker);
    return it == sectors.end() ? std::string("UNKNOWN") : it->second;
}

PricePanel parse_price_panel(std::string_view csv_text) {
    auto rows = csv::parse(csv_text);
    if (rows.empty()) throw FormatError("panel csv is empty");
    const auto& header = rows[0];
    if (header.empty() || header[0] != "date")
        throw FormatError("panel csv header must start with 'date'", 1, 1);
    if (header.size() < 2)
        throw FormatError("panel csv header has no ticker columns", 1, 1);

    PricePanel panel;
    panel.tickers.assign(header.begin() + 1, header.end());
    for (std::size_t c = 0; c < panel.tickers.size(); ++c)
        if (panel.tickers[c].empty())
            throw FormatError("empty ticker name", 1, c + 2);

    const std::size_t n_cols = header.size();
    const std::size_t n_rows = rows.size() - 1;
    panel.dates.reserve(n_rows);
    panel.prices.resize(static_cast<Eigen::Index>(n_rows),
                        static_cast<Eigen::Index>(panel.tickers.size()));

    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& rec = rows[r];
        if (rec.size() != n_cols)
            throw FormatError("row has " + std::to_string(rec.size()) + " fields, expected " +
                                  std::to_string(n_cols),
                              r + 1, 1);
        if (!valid_iso_date(rec[0]))
            throw FormatError("bad ISO-8601 date '" + rec[0] + "'", r + 1, 1);
        if (!panel.dates.empty() && rec[0] <= panel.dates.back())
            throw DataError("dates not strictly increasing at '" + rec[0] + "'");
        panel.dates.push_back(rec[0]);
        for (std::size_t c = 1; c < n_cols; ++c) {
            double v;
            if (csv::is_missing(rec[c])) {
                v = std::numeric_limits<double>::quiet_NaN();
            } else {
                v = csv::parse_double(rec[c], r + 1, c + 1);
                if (!(v > 0.0))
                    throw DataError("non-positive price " + rec[c] + " for " +
                                    panel.tickers[c - 1] + " on " + rec[0]);
            }
            panel.prices(static_cast<Eigen::Index>(r - 1), static_cast<Eigen::Index>(c - 1)) = v;
        }
    }
    return panel;
}

PricePanel load_price_panel(const std::filesystem::path& price_csv,
                            const std::optional<std::filesystem::path>& sector_csv) {
    PricePanel panel = parse_price_panel(csv::read_file(price_csv));
    if (sector_csv) panel.sectors = load_sector_csv(*sector_csv);
    return panel;
}

PricePanel load_price_panel_from_source(const PriceSource& source,
                                        const std::vector<std::string>& universe,
                                        const std::string& start_date,
                                        const std::string& end_date,
                                        const std::optional<std::filesystem::path>& sector_csv) {
    if (!source) throw DataError("price source is empty");
    PricePanel panel = parse_price_panel(source(universe, start_date, end_date));
    if (sector_csv) panel.sectors = load_sector_csv(*sector_csv);
    return panel;
}

std::map<std::string, std::string> parse_sector_csv(std::string_view csv_text) {
    auto rows = csv::parse(csv_text);
    if (rows.empty()) throw FormatError("sector csv is empty");
    if (rows[0].size() < 2 || rows[0][0] != "ticker" || rows[0][1] != "sector")
        throw FormatError("sector csv header must be 'ticker,sector'", 1, 1);
    std::map<std::string, std::string> out;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        if (rows[r].size() < 2)
            throw FormatError("sector row needs 2 fields", r + 1, 1);
        out[rows[r][0]] = rows[r][1];
    }
    return out;
}

std::map<std::string, std::string> load_sector_csv(const std::filesystem::path& path) {
    return parse_sector_csv(csv::read_file(path));
}

PricePanel clean_universe(const PricePanel& panel) {
    std::vector<Eigen::Index> keep;
    for (Eigen::Index c = 0; c < panel.n_stocks(); ++c)
        if (!panel.prices.col(c).hasNaN()) keep.push_back(c);
    if (keep.empty()) throw DataError("no complete tickers");

    PricePanel out;
    out.dates = panel.dates;
    out.sectors = panel.sectors;
    out.tickers.reserve(keep.size());
    out.prices.resize(panel.n_dates(), static_cast<Eigen::Index>(keep.size()));
    for (std::size_t j = 0; j < keep.size(); ++j) {
        out.tickers.push_back(panel.tickers[static_cast<std::size_t>(keep[j])]);
        out.prices.col(static_cast<Eigen::Index>(j)) = panel.prices.col(keep[j]);
    }
    return out;
}

ReturnPanel log_returns(const PricePanel& panel) {
    if (panel.n_dates() < 2)
        throw InsufficientDataError("log returns need at least 2 dates, got " +
                                    std::to_string(panel.n_dates()));
    ReturnPanel out;
    out.tickers = panel.tickers;
    out.dates.assign(panel.dates.begin() + 1, panel.dates.end());
    const Eigen::Index t = panel.n_dates() - 1;
    out.returns = (panel.prices.bottomRows(t).array().log() -
                   panel.prices.topRows(t).array().log())
                      .matrix();
    return out;
}

GbmParams estimate_gbm_params(const Eigen::Ref<const Eigen::VectorXd>& window_prices) {
    const Eigen::Index n = window_prices.size();
    if (n < 2)
        throw InsufficientDataError("GBM estimation needs at least 2 prices, got " +
                                    std::to_string(n));
    Eigen::VectorXd r = (window_prices.tail(n - 1).array().log() -
                         window_prices.head(n - 1).array().log())
                            .matrix();
    const double mean = r.mean();
    double sigma = 0.0;
    if (r.size() > 1) {
        const double ss = (r.array() - mean).square().sum();
        sigma = std::sqrt(ss / static_cast<double>(r.size() - 1));
    }
    GbmParams p;
    p.s0 = window_prices[n - 1];
    p.sigma = sigma;
    p.mu = mean + 0.5 * sigma * sigma;
    return p;
}

std::vector<GbmParams> estimate_gbm_params_all(const PricePanel& panel,
                                               Eigen::Index first_row,
                                               Eigen::Index last_row) {
    if (first_row < 0 || last_row >= panel.n_dates() || first_row > last_row)
        throw DataError("bad GBM estimation window [" + std::to_string(first_row) + ", " +
                        std::to_string(last_row) + "]");
    const Eigen::Index len = last_row - first_row + 1;
    std::vector<GbmParams> out(static_cast<std::size_t>(panel.n_stocks()));
    for (Eigen::Index c = 0; c < panel.n_stocks(); ++c)
        out[static_cast<std::size_t>(c)] =
            estimate_gbm_params(panel.prices.col(c).segment(first_row, len));
    return out;
}

std::string panel_to_csv(const PricePanel& panel) {
    std::string out = "date";
    for (const auto& t : panel.tickers) {
        out += ',';
        out += t;
    }
    out += '\n';
    for (Eigen::Index r = 0; r < panel.n_dates(); ++r) {
        out += panel.dates[static_cast<std::size_t>(r)];
        for (Eigen::Index c = 0; c < panel.n_stocks(); ++c) {
            out += ',';
            const double v = panel.prices(r, c);
            out += std::isnan(v) ? std::string() : csv::format_double(v);
        }
        out += '\n';
    }
    return out;
}

void write_panel_csv(const PricePanel& panel, const std::filesystem::path& path) {
    csv::write_file(path, panel_to_csv(panel));
}

std::vector<std::string> synthetic_dates(std::size_t count) {
    std::vector<std::string> out;
    out.reserve(count);
    const std::int64_t base = days_from_civil(2000, 1, 3);
    char buf[11];
    for (std::size_t i = 0; i < count; ++i) {
        int y;
        unsigned m, d;
        civil_from_days(base + static_cast<std::int64_t>(i), y, m, d);
        std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", y, m, d);
        out.emplace_back(buf);
    }
    return out;
}

}  // namespace marketnet
