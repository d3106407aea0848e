#ifndef MARKETNET_CALIBRATE_HPP
#define MARKETNET_CALIBRATE_HPP

#include <cstdint>
#include <functional>
#include <nlohmann/json_fwd.hpp>
#include <string>
#include <vector>

#include "marketnet/corrnet.hpp"
#include "marketnet/gbm.hpp"

namespace marketnet {

/// Wasserstein-1 distance between the empirical distributions of two 1-D
/// samples: the integral of |F_a^{-1} - F_b^{-1}| over quantiles. For equal
/// sizes this reduces to the mean absolute difference of sorted samples.
/// Throws DataError on empty input.
double wasserstein_1d(std::vector<double> a, std::vector<double> b);

/// Which blend channels a fit may use.
enum class Channel { community, market, noise };

/// Generates the simulated correlation matrix for a candidate weight vector
/// under one ensemble master seed.
using WeightSimulator =
    std::function<CorrMatrix(const BlendWeights& weights, std::uint64_t master_seed)>;

struct FitResult {
    BlendWeights weights;
    double distance = 0.0;  // objective at the returned weights
    int evaluations = 0;    // simulator calls, refinement included
    double grid_step = 0.0;
    std::vector<Channel> active;
    std::vector<std::uint64_t> ensemble_seeds;
};

/// Grid-search the simplex of active blend weights (inactive weights stay 0).
/// Each axis runs 0, step, 2 step, ..., plus the exact endpoint 1. The
/// objective is the mean over master_seeds of wasserstein_1d between the
/// target samples and the simulated off-diagonal correlation entries.
/// Candidates are scanned in ascending lexicographic (w_l, w_m, w_n) order
/// and ties keep the earlier vector; a second pass refines around the best
/// point at half step. Simulator exceptions are rethrown with the offending
/// weight vector named.
FitResult fit_weights(const std::vector<double>& target_offdiag,
                      const WeightSimulator& simulate, const std::vector<Channel>& active,
                      double grid_step, const std::vector<std::uint64_t>& master_seeds);

std::string channel_name(Channel c);

void to_json(nlohmann::json& j, const FitResult& r);

}  // namespace marketnet

#endif  // MARKETNET_CALIBRATE_HPP
