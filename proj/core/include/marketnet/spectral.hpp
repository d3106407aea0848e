#ifndef MARKETNET_SPECTRAL_HPP
#define MARKETNET_SPECTRAL_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "marketnet/corrnet.hpp"

namespace marketnet {

/// Full eigendecomposition of a correlation matrix, eigenvalues descending,
/// eigenvector column i paired with eigenvalue i. market_indices is empty
/// until select_market_modes fills it.
struct SpectralSplit {
    std::vector<std::string> tickers;
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXd eigenvectors;
    std::vector<int> market_indices;
    int n_market = 0;

    Eigen::Index size() const { return eigenvalues.size(); }

    /// Complement of market_indices, the noise modes.
    std::vector<int> noise_indices() const;
};

/// Marchenko-Pastur parameters for aspect ratio q = T/N and variance scale
/// sigma2. Edges lambda_minus/plus = sigma2 (1 -/+ sqrt(1/q))^2.
struct MpParams {
    double q = 1.0;
    double sigma2 = 1.0;
    double lambda_minus = 0.0;
    double lambda_plus = 4.0;
};

std::pair<double, double> mp_edges(double q, double sigma2);
MpParams mp_params(double q, double sigma2);

/// Marchenko-Pastur density at lambda; 0 outside [lambda_minus, lambda_plus].
double mp_density(double lambda, const MpParams& params);

/// Variance scale left after removing the top eigenvalue: 1 - lambda_market/N.
double rescaled_sigma2(double lambda_market, Eigen::Index n_stocks);

/// Symmetric eigendecomposition; throws DataError on non-symmetric input.
SpectralSplit eigendecompose(const CorrMatrix& corr);

/// Market-mode selection result: the split with market_indices filled and the
/// influential tickers (lexicographic order) that set n_market.
struct MarketSelection {
    SpectralSplit split;
    std::vector<std::string> market_tickers;
};

/// n_market = size of the intersection of the top-fraction eigencentrality
/// and pagerank node sets (rank cut of ceil(top_fraction N_nodes), ties
/// broken by ticker order); market modes are the n_market largest
/// eigenvalues. Throws DataError when the intersection is empty ("no
/// influential stocks") or when the smallest selected eigenvalue falls below
/// the unrescaled lambda_plus.
MarketSelection select_market_modes(const SpectralSplit& split,
                                    const std::vector<NodeStats>& stats,
                                    const MpParams& mp, double top_fraction = 0.03);

/// M = Q Lambda_S Q^T keeping only the listed eigenvalues. Complementary
/// index sets sum to the original matrix exactly.
Eigen::MatrixXd mode_projection(const SpectralSplit& split, const std::vector<int>& indices);

/// Correlation-like matrix rescaled to unit diagonal where defined.
/// Rows with diagonal <= 1e-12 are flagged undefined and left zero.
struct RescaledCorr {
    std::vector<std::string> tickers;
    Eigen::MatrixXd values;
    std::vector<bool> defined;

    /// Off-diagonal upper-triangle entries between defined rows.
    std::vector<double> offdiagonal() const;
};

RescaledCorr rescale_correlation(const Eigen::MatrixXd& m,
                                 const std::vector<std::string>& tickers);

/// Off-diagonal upper-triangle entries of a plain correlation matrix.
std::vector<double> offdiagonal_entries(const Eigen::MatrixXd& corr);

struct Histogram {
    std::vector<double> edges;  // bins + 1 ascending edges
    std::vector<int> counts;    // per bin; last bin right-closed
};

/// Equal-width histogram over [lo, hi]; values outside are clamped into the
/// boundary bins. The (values, bins) overload spans the sample range.
Histogram histogram(const std::vector<double>& values, int bins, double lo, double hi);
Histogram histogram(const std::vector<double>& values, int bins);

/// Eigenvalue histogram with Marchenko-Pastur overlay curves sampled on a
/// uniform lambda grid (raw and rescaled parameter sets).
struct SpectrumHistogram {
    Histogram hist;
    std::vector<double> mp_lambda;
    std::vector<double> mp_density_raw;
    std::vector<double> mp_density_rescaled;
};

SpectrumHistogram eigenvalue_histogram(const SpectralSplit& split, int bins,
                                       const MpParams& raw, const MpParams& rescaled);

/// Spectrum CSV `index,eigenvalue,is_market`.
std::string spectrum_to_csv(const SpectralSplit& split);

/// Histogram CSV `bin_left,bin_right,count`; the MP overlay export adds
/// `lambda,density_raw,density_rescaled` rows in a second block.
std::string histogram_to_csv(const Histogram& h);
std::string spectrum_histogram_to_csv(const SpectrumHistogram& sh);

}  // namespace marketnet

#endif  // MARKETNET_SPECTRAL_HPP
