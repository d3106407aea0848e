#include "marketnet/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "marketnet/csv.hpp"
#include "marketnet/errors.hpp"

namespace marketnet {
namespace {

constexpr double kDiagTol = 1e-12;   // below this a rescale diagonal is undefined
constexpr int kMpCurveSamples = 512;

// Indices of the top `cut` entries by value descending, ties by ticker
// ascending.
std::vector<std::size_t> top_cut(const std::vector<NodeStats>& stats, std::size_t cut,
                                 double NodeStats::*field) {
    std::vector<std::size_t> order(stats.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (stats[a].*field != stats[b].*field) return stats[a].*field > stats[b].*field;
        return stats[a].ticker < stats[b].ticker;
    });
    order.resize(std::min(cut, order.size()));
    return order;
}

}  // namespace

std::vector<int> SpectralSplit::noise_indices() const {
    std::set<int> market(market_indices.begin(), market_indices.end());
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(size()) - market.size());
    for (int i = 0; i < static_cast<int>(size()); ++i)
        if (!market.count(i)) out.push_back(i);
    return out;
}

std::pair<double, double> mp_edges(double q, double sigma2) {
    if (q <= 0.0 || sigma2 <= 0.0)
        throw DataError("Marchenko-Pastur needs q > 0 and sigma2 > 0");
    const double root = std::sqrt(1.0 / q);
    const double lo = 1.0 - root;
    const double hi = 1.0 + root;
    return {sigma2 * lo * lo, sigma2 * hi * hi};
}

MpParams mp_params(double q, double sigma2) {
    MpParams p;
    p.q = q;
    p.sigma2 = sigma2;
    std::tie(p.lambda_minus, p.lambda_plus) = mp_edges(q, sigma2);
    return p;
}

double mp_density(double lambda, const MpParams& params) {
    if (lambda <= 0.0 || lambda < params.lambda_minus || lambda > params.lambda_plus)
        return 0.0;
    const double prod = (params.lambda_plus - lambda) * (lambda - params.lambda_minus);
    if (prod <= 0.0) return 0.0;
    return params.q / (2.0 * M_PI * params.sigma2) * std::sqrt(prod) / lambda;
}

double rescaled_sigma2(double lambda_market, Eigen::Index n_stocks) {
    if (n_stocks <= 0) throw DataError("rescaled_sigma2 needs n_stocks > 0");
    // lambda == n_stocks would leave zero residual variance (a perfectly
    // correlated universe); reject it here instead of deep in the MP math.
    if (lambda_market < 0.0 || lambda_market >= static_cast<double>(n_stocks))
        throw DataError("lambda_market must lie in [0, n_stocks)");
    return 1.0 - lambda_market / static_cast<double>(n_stocks);
}

SpectralSplit eigendecompose(const CorrMatrix& corr) {
    const Eigen::Index n = corr.size();
    if (n == 0) throw DataError("eigendecompose of an empty matrix");
    if ((corr.values - corr.values.transpose()).cwiseAbs().maxCoeff() > 1e-9)
        throw DataError("correlation matrix is not symmetric");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(corr.values);
    if (solver.info() != Eigen::Success)
        throw ConvergenceError("symmetric eigendecomposition failed", 0.0, 0);

    SpectralSplit split;
    split.tickers = corr.tickers;
    split.eigenvalues = solver.eigenvalues().reverse();
    split.eigenvectors = solver.eigenvectors().rowwise().reverse();

    // Deterministic sign: largest-|entry| component of each eigenvector
    // is positive.
    for (Eigen::Index c = 0; c < n; ++c) {
        Eigen::Index at = 0;
        split.eigenvectors.col(c).cwiseAbs().maxCoeff(&at);
        if (split.eigenvectors(at, c) < 0.0) split.eigenvectors.col(c) *= -1.0;
    }
    return split;
}

MarketSelection select_market_modes(const SpectralSplit& split,
                                    const std::vector<NodeStats>& stats,
                                    const MpParams& mp, double top_fraction) {
    if (stats.empty()) throw DataError("no influential stocks");
    if (!(top_fraction > 0.0 && top_fraction <= 1.0))
        throw DataError("top fraction must lie in (0, 1]");
    const std::size_t cut = static_cast<std::size_t>(
        std::ceil(top_fraction * static_cast<double>(stats.size())));

    const auto top_eig = top_cut(stats, cut, &NodeStats::eigencentrality);
    const auto top_pr = top_cut(stats, cut, &NodeStats::pagerank);

    std::set<std::string> eig_set;
    for (std::size_t i : top_eig) eig_set.insert(stats[i].ticker);
    std::vector<std::string> selected;
    for (std::size_t i : top_pr)
        if (eig_set.count(stats[i].ticker)) selected.push_back(stats[i].ticker);
    std::sort(selected.begin(), selected.end());

    if (selected.empty()) throw DataError("no influential stocks");
    const int n_market = static_cast<int>(selected.size());
    if (n_market > split.size())
        throw DataError("more influential stocks than eigenvalues");

    const double lambda_min_selected = split.eigenvalues[n_market - 1];
    if (lambda_min_selected < mp.lambda_plus)
        throw DataError("smallest market eigenvalue " + csv::format_double(lambda_min_selected) +
                        " is below the Marchenko-Pastur edge " +
                        csv::format_double(mp.lambda_plus));

    MarketSelection sel;
    sel.split = split;
    sel.split.n_market = n_market;
    sel.split.market_indices.resize(static_cast<std::size_t>(n_market));
    std::iota(sel.split.market_indices.begin(), sel.split.market_indices.end(), 0);
    sel.market_tickers = std::move(selected);
    return sel;
}

Eigen::MatrixXd mode_projection(const SpectralSplit& split, const std::vector<int>& indices) {
    const Eigen::Index n = split.size();
    for (int i : indices)
        if (i < 0 || i >= n)
            throw DataError("mode index " + std::to_string(i) + " out of range");

    Eigen::MatrixXd v(n, static_cast<Eigen::Index>(indices.size()));
    Eigen::VectorXd lam(static_cast<Eigen::Index>(indices.size()));
    for (std::size_t k = 0; k < indices.size(); ++k) {
        v.col(static_cast<Eigen::Index>(k)) = split.eigenvectors.col(indices[k]);
        lam[static_cast<Eigen::Index>(k)] = split.eigenvalues[indices[k]];
    }
    Eigen::MatrixXd m = v * lam.asDiagonal() * v.transpose();
    return ((m + m.transpose()) / 2.0).eval();
}

std::vector<double> RescaledCorr::offdiagonal() const {
    std::vector<double> out;
    const Eigen::Index n = values.rows();
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!defined[static_cast<std::size_t>(i)]) continue;
        for (Eigen::Index j = i + 1; j < n; ++j)
            if (defined[static_cast<std::size_t>(j)]) out.push_back(values(i, j));
    }
    return out;
}

RescaledCorr rescale_correlation(const Eigen::MatrixXd& m,
                                 const std::vector<std::string>& tickers) {
    const Eigen::Index n = m.rows();
    if (m.cols() != n) throw DataError("rescale_correlation needs a square matrix");

    RescaledCorr out;
    out.tickers = tickers;
    out.values = Eigen::MatrixXd::Zero(n, n);
    out.defined.resize(static_cast<std::size_t>(n));
    Eigen::VectorXd scale(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        out.defined[static_cast<std::size_t>(i)] = m(i, i) > kDiagTol;
        scale[i] = out.defined[static_cast<std::size_t>(i)] ? 1.0 / std::sqrt(m(i, i)) : 0.0;
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!out.defined[static_cast<std::size_t>(i)]) continue;
        for (Eigen::Index j = 0; j < n; ++j)
            if (out.defined[static_cast<std::size_t>(j)])
                out.values(i, j) = m(i, j) * scale[i] * scale[j];
        out.values(i, i) = 1.0;
    }
    return out;
}

std::vector<double> offdiagonal_entries(const Eigen::MatrixXd& corr) {
    std::vector<double> out;
    const Eigen::Index n = corr.rows();
    out.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j) out.push_back(corr(i, j));
    return out;
}

Histogram histogram(const std::vector<double>& values, int bins, double lo, double hi) {
    if (bins < 1) throw DataError("histogram needs bins >= 1");
    if (!(hi > lo)) {
        lo -= 0.5;
        hi = lo + 1.0;
    }
    Histogram h;
    h.edges.resize(static_cast<std::size_t>(bins) + 1);
    const double width = (hi - lo) / bins;
    for (int b = 0; b <= bins; ++b)
        h.edges[static_cast<std::size_t>(b)] = lo + width * b;
    h.edges.back() = hi;
    h.counts.assign(static_cast<std::size_t>(bins), 0);
    for (double v : values) {
        int b = static_cast<int>(std::floor((v - lo) / width));
        b = std::clamp(b, 0, bins - 1);
        ++h.counts[static_cast<std::size_t>(b)];
    }
    return h;
}

Histogram histogram(const std::vector<double>& values, int bins) {
    if (values.empty()) return histogram(values, bins, 0.0, 1.0);
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    return histogram(values, bins, *lo, *hi);
}

SpectrumHistogram eigenvalue_histogram(const SpectralSplit& split, int bins,
                                       const MpParams& raw, const MpParams& rescaled) {
    SpectrumHistogram sh;
    std::vector<double> vals(split.eigenvalues.data(),
                             split.eigenvalues.data() + split.eigenvalues.size());
    sh.hist = histogram(vals, bins);

    const double hi = 1.05 * std::max(raw.lambda_plus, rescaled.lambda_plus);
    sh.mp_lambda.resize(kMpCurveSamples);
    sh.mp_density_raw.resize(kMpCurveSamples);
    sh.mp_density_rescaled.resize(kMpCurveSamples);
    for (int i = 0; i < kMpCurveSamples; ++i) {
        const double lambda = hi * (i + 0.5) / kMpCurveSamples;
        sh.mp_lambda[static_cast<std::size_t>(i)] = lambda;
        sh.mp_density_raw[static_cast<std::size_t>(i)] = mp_density(lambda, raw);
        sh.mp_density_rescaled[static_cast<std::size_t>(i)] = mp_density(lambda, rescaled);
    }
    return sh;
}

std::string spectrum_to_csv(const SpectralSplit& split) {
    std::set<int> market(split.market_indices.begin(), split.market_indices.end());
    std::string out = "index,eigenvalue,is_market\n";
    for (Eigen::Index i = 0; i < split.size(); ++i) {
        out += std::to_string(i);
        out += ',';
        out += csv::format_double(split.eigenvalues[i]);
        out += ',';
        out += market.count(static_cast<int>(i)) ? '1' : '0';
        out += '\n';
    }
    return out;
}

std::string histogram_to_csv(const Histogram& h) {
    std::string out = "bin_left,bin_right,count\n";
    for (std::size_t b = 0; b < h.counts.size(); ++b) {
        out += csv::format_double(h.edges[b]);
        out += ',';
        out += csv::format_double(h.edges[b + 1]);
        out += ',';
        out += std::to_string(h.counts[b]);
        out += '\n';
    }
    return out;
}

std::string spectrum_histogram_to_csv(const SpectrumHistogram& sh) {
    std::string out = histogram_to_csv(sh.hist);
    out += "\nlambda,density_raw,density_rescaled\n";
    for (std::size_t i = 0; i < sh.mp_lambda.size(); ++i) {
        out += csv::format_double(sh.mp_lambda[i]);
        out += ',';
        out += csv::format_double(sh.mp_density_raw[i]);
        out += ',';
        out += csv::format_double(sh.mp_density_rescaled[i]);
        out += '\n';
    }
    return out;
}

}  // namespace marketnet
