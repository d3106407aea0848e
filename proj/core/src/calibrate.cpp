#include "marketnet/calibrate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <nlohmann/json.hpp>

#include "marketnet/errors.hpp"
#include "marketnet/spectral.hpp"

namespace marketnet {
namespace {

// Sum-to-one slack for simplex grid enumeration.
constexpr double kSimplexEps = 1e-9;

struct Candidate {
    BlendWeights w;
};

// Grid coordinates 0, step, 2 step, ... with the exact endpoint 1 appended.
std::vector<double> axis_points(double step) {
    std::vector<double> pts;
    for (int k = 0;; ++k) {
        const double v = k * step;
        if (v > 1.0 - kSimplexEps) break;
        pts.push_back(v);
    }
    pts.push_back(1.0);
    return pts;
}

double& weight_of(BlendWeights& w, Channel c) {
    switch (c) {
        case Channel::community: return w.w_l;
        case Channel::market: return w.w_m;
        default: return w.w_n;
    }
}

// All weight vectors on the active-channel simplex with the given axis
// points; inactive channels stay 0. Enumeration order is ascending
// lexicographic in (w_l, w_m, w_n).
std::vector<Candidate> simplex_grid(const std::vector<Channel>& active,
                                    const std::vector<double>& pts) {
    std::vector<Candidate> out;
    // Assign axis values to active channels sorted so the lexicographic
    // (w_l, w_m, w_n) order matches the enumeration order.
    std::vector<Channel> axes = active;
    std::sort(axes.begin(), axes.end());

    if (axes.size() == 1) {
        Candidate c;
        weight_of(c.w, axes[0]) = 1.0;
        out.push_back(c);
        return out;
    }
    if (axes.size() == 2) {
        for (double v : pts) {
            Candidate c;
            weight_of(c.w, axes[0]) = v;
            weight_of(c.w, axes[1]) = 1.0 - v;
            out.push_back(c);
        }
        return out;
    }
    for (double v0 : pts)
        for (double v1 : pts) {
            const double v2 = 1.0 - v0 - v1;
            if (v2 < -kSimplexEps) continue;
            Candidate c;
            weight_of(c.w, axes[0]) = v0;
            weight_of(c.w, axes[1]) = v1;
            weight_of(c.w, axes[2]) = std::max(v2, 0.0);
            out.push_back(c);
        }
    return out;
}

// Half-step neighborhood of a point, clipped to the simplex, enumeration
// again ascending lexicographic.
std::vector<Candidate> refine_candidates(const BlendWeights& best,
                                         const std::vector<Channel>& active, double half) {
    std::vector<Channel> axes = active;
    std::sort(axes.begin(), axes.end());
    const std::size_t free_axes = axes.size() - 1;  // last axis absorbs the rest

    std::vector<Candidate> out;
    if (free_axes == 0) return out;

    BlendWeights base = best;
    const std::array<double, 3> offsets{-half, 0.0, half};
    if (free_axes == 1) {
        double b0 = weight_of(base, axes[0]);
        for (double d : offsets) {
            const double v = b0 + d;
            if (v < -kSimplexEps || v > 1.0 + kSimplexEps) continue;
            Candidate c;
            weight_of(c.w, axes[0]) = std::clamp(v, 0.0, 1.0);
            weight_of(c.w, axes[1]) = 1.0 - std::clamp(v, 0.0, 1.0);
            out.push_back(c);
        }
        return out;
    }
    const double b0 = weight_of(base, axes[0]);
    const double b1 = weight_of(base, axes[1]);
    for (double d0 : offsets)
        for (double d1 : offsets) {
            const double v0 = b0 + d0;
            const double v1 = b1 + d1;
            if (v0 < -kSimplexEps || v1 < -kSimplexEps) continue;
            const double v2 = 1.0 - v0 - v1;
            if (v2 < -kSimplexEps) continue;
            Candidate c;
            weight_of(c.w, axes[0]) = std::clamp(v0, 0.0, 1.0);
            weight_of(c.w, axes[1]) = std::clamp(v1, 0.0, 1.0);
            weight_of(c.w, axes[2]) = std::max(v2, 0.0);
            out.push_back(c);
        }
    return out;
}

bool lex_less(const BlendWeights& a, const BlendWeights& b) {
    if (a.w_l != b.w_l) return a.w_l < b.w_l;
    if (a.w_m != b.w_m) return a.w_m < b.w_m;
    return a.w_n < b.w_n;
}

std::string weights_str(const BlendWeights& w) {
    return "(w_l=" + std::to_string(w.w_l) + ", w_m=" + std::to_string(w.w_m) +
           ", w_n=" + std::to_string(w.w_n) + ")";
}

}  // namespace

double wasserstein_1d(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw DataError("wasserstein needs non-empty samples");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());

    if (a.size() == b.size()) {
        double acc = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) acc += std::abs(a[i] - b[i]);
        return acc / static_cast<double>(a.size());
    }

    // Piecewise-constant quantile integral over the merged breakpoints.
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double p = 0.0, acc = 0.0;
    while (i < a.size() && j < b.size()) {
        const double next_a = static_cast<double>(i + 1) / na;
        const double next_b = static_cast<double>(j + 1) / nb;
        const double seg_end = std::min(next_a, next_b);
        acc += (seg_end - p) * std::abs(a[i] - b[j]);
        p = seg_end;
        if (next_a <= seg_end + 1e-15) ++i;
        if (next_b <= seg_end + 1e-15) ++j;
    }
    return acc;
}

std::string channel_name(Channel c) {
    switch (c) {
        case Channel::community: return "community";
        case Channel::market: return "market";
        default: return "noise";
    }
}

FitResult fit_weights(const std::vector<double>& target_offdiag,
                      const WeightSimulator& simulate, const std::vector<Channel>& active,
                      double grid_step, const std::vector<std::uint64_t>& master_seeds) {
    if (target_offdiag.empty()) throw DataError("fit target is empty");
    if (!simulate) throw DataError("fit simulator is empty");
    if (active.empty() || active.size() > 3) throw DataError("fit needs 1 to 3 active channels");
    {
        std::vector<Channel> dedup = active;
        std::sort(dedup.begin(), dedup.end());
        if (std::adjacent_find(dedup.begin(), dedup.end()) != dedup.end())
            throw DataError("duplicate active channel");
    }
    if (!(grid_step > 0.0 && grid_step <= 1.0)) throw DataError("grid step must be in (0, 1]");
    if (master_seeds.empty()) throw DataError("fit needs at least one master seed");

    FitResult result;
    result.grid_step = grid_step;
    result.active = active;
    result.ensemble_seeds = master_seeds;

    auto objective = [&](const BlendWeights& w) {
        double acc = 0.0;
        for (std::uint64_t seed : master_seeds) {
            CorrMatrix sim;
            try {
                sim = simulate(w, seed);
            } catch (const std::exception& e) {
                throw DataError("simulator failed at weights " + weights_str(w) + ": " +
                                e.what());
            }
            acc += wasserstein_1d(target_offdiag, offdiagonal_entries(sim.values));
            ++result.evaluations;
        }
        return acc / static_cast<double>(master_seeds.size());
    };

    auto scan = [&](const std::vector<Candidate>& cands, bool have_best) {
        for (const auto& c : cands) {
            const double obj = objective(c.w);
            if (!have_best || obj < result.distance ||
                (obj == result.distance && lex_less(c.w, result.weights))) {
                result.distance = obj;
                result.weights = c.w;
                have_best = true;
            }
        }
    };

    scan(simplex_grid(active, axis_points(grid_step)), false);
    scan(refine_candidates(result.weights, active, grid_step / 2.0), true);
    return result;
}

void to_json(nlohmann::json& j, const FitResult& r) {
    std::vector<std::string> names;
    names.reserve(r.active.size());
    for (Channel c : r.active) names.push_back(channel_name(c));
    j = nlohmann::json{{"weights", r.weights},
                       {"distance", r.distance},
                       {"evaluations", r.evaluations},
                       {"grid", {{"step", r.grid_step}, {"lower", 0.0}, {"upper", 1.0}}},
                       {"active_channels", names},
                       {"ensemble_seeds", r.ensemble_seeds}};
}

}  // namespace marketnet
