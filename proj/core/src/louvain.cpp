#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <utility>
#include <vector>

#include "marketnet/corrnet.hpp"

namespace marketnet {
namespace {

// Gains within this margin of each other count as ties; keeps move decisions
// stable under floating-point noise.
constexpr double kGainEps = 1e-12;

struct LevelGraph {
    std::vector<std::vector<std::pair<int, double>>> adj;  // (neighbor, weight), no self entries
    std::vector<double> self_loop;                         // per-node self weight, counted once

    int n() const { return static_cast<int>(adj.size()); }
};

// Fisher-Yates with explicit draws; std::shuffle's draw sequence is
// implementation-defined and the seed contract requires stable orders.
void shuffle_order(std::vector<int>& order, std::mt19937_64& rng) {
    for (std::size_t i = order.size(); i > 1; --i)
        std::swap(order[i - 1], order[rng() % i]);
}

// One level of first-improvement local moves. comm is updated in place;
// returns whether any node changed community.
bool local_moves(const LevelGraph& g, std::vector<int>& comm, std::mt19937_64& rng) {
    const int n = g.n();
    std::vector<double> k(static_cast<std::size_t>(n), 0.0);   // weighted degree
    std::vector<double> sum_tot(static_cast<std::size_t>(n), 0.0);
    double two_m = 0.0;
    for (int u = 0; u < n; ++u) {
        double ku = 2.0 * g.self_loop[static_cast<std::size_t>(u)];
        for (const auto& [v, w] : g.adj[static_cast<std::size_t>(u)]) ku += w;
        k[static_cast<std::size_t>(u)] = ku;
        two_m += ku;
    }
    if (two_m <= 0.0) return false;
    const double m = two_m / 2.0;
    for (int u = 0; u < n; ++u) sum_tot[static_cast<std::size_t>(comm[static_cast<std::size_t>(u)])] += k[static_cast<std::size_t>(u)];

    std::vector<int> order(static_cast<std::size_t>(n));
    for (int u = 0; u < n; ++u) order[static_cast<std::size_t>(u)] = u;
    shuffle_order(order, rng);

    std::vector<double> w_to(static_cast<std::size_t>(n), 0.0);  // scratch: weight to community
    bool any_move = false;
    for (bool moved_in_pass = true; moved_in_pass;) {
        moved_in_pass = false;
        for (int u : order) {
            const int c_old = comm[static_cast<std::size_t>(u)];
            std::vector<int> cands;
            for (const auto& [v, w] : g.adj[static_cast<std::size_t>(u)]) {
                const int cv = comm[static_cast<std::size_t>(v)];
                if (w_to[static_cast<std::size_t>(cv)] == 0.0) cands.push_back(cv);
                w_to[static_cast<std::size_t>(cv)] += w;
            }
            sum_tot[static_cast<std::size_t>(c_old)] -= k[static_cast<std::size_t>(u)];
            const double ku_2m2 = k[static_cast<std::size_t>(u)] / (2.0 * m * m);
            auto gain = [&](int c) {
                return w_to[static_cast<std::size_t>(c)] / m -
                       ku_2m2 * sum_tot[static_cast<std::size_t>(c)];
            };
            const double base = gain(c_old);

            std::sort(cands.begin(), cands.end());
            int chosen = c_old;
            for (int c : cands) {
                if (c == c_old) continue;
                if (gain(c) > base + kGainEps) {
                    chosen = c;
                    break;
                }
            }
            sum_tot[static_cast<std::size_t>(chosen)] += k[static_cast<std::size_t>(u)];
            if (chosen != c_old) {
                comm[static_cast<std::size_t>(u)] = chosen;
                moved_in_pass = true;
                any_move = true;
            }
            for (const auto& [v, w] : g.adj[static_cast<std::size_t>(u)])
                w_to[static_cast<std::size_t>(comm[static_cast<std::size_t>(v)])] = 0.0;
            w_to[static_cast<std::size_t>(c_old)] = 0.0;
            w_to[static_cast<std::size_t>(chosen)] = 0.0;
        }
    }
    return any_move;
}

// Compact community labels to 0..k-1 (first occurrence over node order) and
// return k.
int compact_labels(std::vector<int>& labels) {
    std::map<int, int> remap;
    for (int& l : labels) {
        auto [it, fresh] = remap.try_emplace(l, static_cast<int>(remap.size()));
        l = it->second;
        (void)fresh;
    }
    return static_cast<int>(remap.size());
}

LevelGraph aggregate(const LevelGraph& g, const std::vector<int>& comm, int k) {
    LevelGraph out;
    out.adj.resize(static_cast<std::size_t>(k));
    out.self_loop.assign(static_cast<std::size_t>(k), 0.0);
    for (int u = 0; u < g.n(); ++u)
        out.self_loop[static_cast<std::size_t>(comm[static_cast<std::size_t>(u)])] +=
            g.self_loop[static_cast<std::size_t>(u)];

    std::map<std::pair<int, int>, double> acc;
    for (int u = 0; u < g.n(); ++u) {
        const int cu = comm[static_cast<std::size_t>(u)];
        for (const auto& [v, w] : g.adj[static_cast<std::size_t>(u)]) {
            if (v < u) continue;  // each undirected pair once
            const int cv = comm[static_cast<std::size_t>(v)];
            if (cu == cv)
                out.self_loop[static_cast<std::size_t>(cu)] += w;
            else
                acc[{std::min(cu, cv), std::max(cu, cv)}] += w;
        }
    }
    for (const auto& [pair, w] : acc) {
        out.adj[static_cast<std::size_t>(pair.first)].emplace_back(pair.second, w);
        out.adj[static_cast<std::size_t>(pair.second)].emplace_back(pair.first, w);
    }
    return out;
}

}  // namespace

std::vector<int> louvain_labels(const StockGraph& g, std::uint64_t seed) {
    const int n = static_cast<int>(g.n_nodes());
    std::vector<int> labels(static_cast<std::size_t>(n));
    for (int u = 0; u < n; ++u) labels[static_cast<std::size_t>(u)] = u;
    if (n == 0) return labels;

    LevelGraph level;
    level.adj.resize(static_cast<std::size_t>(n));
    level.self_loop.assign(static_cast<std::size_t>(n), 0.0);
    for (const auto& e : g.edges) {
        const double w = std::abs(e.weight);
        level.adj[static_cast<std::size_t>(e.source)].emplace_back(e.target, w);
        level.adj[static_cast<std::size_t>(e.target)].emplace_back(e.source, w);
    }

    std::mt19937_64 rng(seed);
    std::vector<int> comm(static_cast<std::size_t>(n));
    for (int u = 0; u < n; ++u) comm[static_cast<std::size_t>(u)] = u;

    while (true) {
        const bool moved = local_moves(level, comm, rng);
        if (!moved) break;
        const int k = compact_labels(comm);
        for (int u = 0; u < n; ++u)
            labels[static_cast<std::size_t>(u)] =
                comm[static_cast<std::size_t>(labels[static_cast<std::size_t>(u)])];
        if (k == level.n()) break;
        level = aggregate(level, comm, k);
        comm.resize(static_cast<std::size_t>(k));
        for (int c = 0; c < k; ++c) comm[static_cast<std::size_t>(c)] = c;
    }
    compact_labels(labels);
    return labels;
}

}  // namespace marketnet
