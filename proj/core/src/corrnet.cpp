#include "marketnet/corrnet.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "marketnet/csv.hpp"
#include "marketnet/errors.hpp"

namespace marketnet {
namespace {

constexpr double kPowerTol = 1e-10;
constexpr int kPowerMaxIter = 10000;

// |weight| row sums (weighted degrees).
Eigen::VectorXd abs_strengths(const StockGraph& g) {
    Eigen::VectorXd s = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(g.n_nodes()));
    for (const auto& e : g.edges) {
        const double w = std::abs(e.weight);
        s[e.source] += w;
        s[e.target] += w;
    }
    return s;
}

template <typename T>
std::map<std::string, T> zip_nodes(const StockGraph& g, const std::vector<T>& values) {
    std::map<std::string, T> out;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) out[g.nodes[i]] = values[i];
    return out;
}

std::map<std::string, double> zip_nodes(const StockGraph& g, const Eigen::VectorXd& values) {
    std::map<std::string, double> out;
    for (std::size_t i = 0; i < g.nodes.size(); ++i)
        out[g.nodes[i]] = values[static_cast<Eigen::Index>(i)];
    return out;
}

}  // namespace

std::vector<std::vector<std::pair<int, double>>> StockGraph::adjacency() const {
    std::vector<std::vector<std::pair<int, double>>> adj(nodes.size());
    for (const auto& e : edges) {
        adj[static_cast<std::size_t>(e.source)].emplace_back(e.target, e.weight);
        adj[static_cast<std::size_t>(e.target)].emplace_back(e.source, e.weight);
    }
    for (auto& nbrs : adj)
        std::sort(nbrs.begin(), nbrs.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
    return adj;
}

int StockGraph::index_of(const std::string& ticker) const {
    auto it = std::find(nodes.begin(), nodes.end(), ticker);
    return it == nodes.end() ? -1 : static_cast<int>(it - nodes.begin());
}

CorrMatrix correlation_matrix(const ReturnPanel& returns) {
    const Eigen::Index n = returns.n_stocks();
    const Eigen::Index t = returns.n_obs();
    if (t < 2) throw InsufficientDataError("correlation needs at least 2 return observations");

    Eigen::MatrixXd centered = returns.returns.rowwise() - returns.returns.colwise().mean();
    Eigen::VectorXd norms = centered.colwise().norm();
    for (Eigen::Index c = 0; c < n; ++c)
        if (norms[c] <= 0.0)
            throw DataError("zero-variance return series for ticker " +
                            returns.tickers[static_cast<std::size_t>(c)]);

    centered.array().rowwise() /= norms.transpose().array();
    CorrMatrix corr;
    corr.tickers = returns.tickers;
    corr.values.noalias() = centered.transpose() * centered;
    corr.values = ((corr.values + corr.values.transpose()) / 2.0).eval();
    corr.values.diagonal().setOnes();
    return corr;
}

StockGraph threshold_graph(const CorrMatrix& corr, double rho_c) {
    if (rho_c < 0.0 || rho_c > 1.0)
        throw DataError("rho_c must lie in [0, 1], got " + std::to_string(rho_c));

    const Eigen::Index n = corr.size();
    std::vector<char> connected(static_cast<std::size_t>(n), 0);
    std::vector<GraphEdge> raw;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j)
            if (std::abs(corr.values(i, j)) >= rho_c) {
                raw.push_back({static_cast<int>(i), static_cast<int>(j), corr.values(i, j)});
                connected[static_cast<std::size_t>(i)] = 1;
                connected[static_cast<std::size_t>(j)] = 1;
            }

    StockGraph g;
    g.rho_c = rho_c;
    std::vector<int> remap(static_cast<std::size_t>(n), -1);
    for (Eigen::Index i = 0; i < n; ++i)
        if (connected[static_cast<std::size_t>(i)]) {
            remap[static_cast<std::size_t>(i)] = static_cast<int>(g.nodes.size());
            g.nodes.push_back(corr.tickers[static_cast<std::size_t>(i)]);
        }
    g.edges.reserve(raw.size());
    for (const auto& e : raw)
        g.edges.push_back({remap[static_cast<std::size_t>(e.source)],
                           remap[static_cast<std::size_t>(e.target)], e.weight});
    return g;
}

std::vector<int> degree_values(const StockGraph& g) {
    std::vector<int> deg(g.n_nodes(), 0);
    for (const auto& e : g.edges) {
        ++deg[static_cast<std::size_t>(e.source)];
        ++deg[static_cast<std::size_t>(e.target)];
    }
    return deg;
}

std::map<std::string, int> degree_sequence(const StockGraph& g) {
    return zip_nodes(g, degree_values(g));
}

Eigen::VectorXd eigencentrality_values(const StockGraph& g) {
    const Eigen::Index n = static_cast<Eigen::Index>(g.n_nodes());
    if (n == 0) throw DataError("eigenvector centrality of an empty graph");

    // Power iteration on |A| + I: the shift keeps the iteration from
    // oscillating on bipartite structure without changing the eigenvectors.
    Eigen::VectorXd x = Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
    Eigen::VectorXd next(n);
    double residual = 1.0;
    for (int it = 0; it < kPowerMaxIter; ++it) {
        next = x;  // the identity term
        for (const auto& e : g.edges) {
            const double w = std::abs(e.weight);
            next[e.source] += w * x[e.target];
            next[e.target] += w * x[e.source];
        }
        next /= next.norm();
        residual = (next - x).norm();
        x.swap(next);
        if (residual <= kPowerTol) {
            for (Eigen::Index i = 0; i < n; ++i) x[i] = std::max(x[i], 0.0);
            x /= x.norm();
            return x;
        }
    }
    throw ConvergenceError("eigenvector centrality power iteration hit the iteration limit",
                           residual, kPowerMaxIter);
}

std::map<std::string, double> eigenvector_centrality(const StockGraph& g) {
    return zip_nodes(g, eigencentrality_values(g));
}

Eigen::VectorXd pagerank_values(const StockGraph& g, double damping) {
    const Eigen::Index n = static_cast<Eigen::Index>(g.n_nodes());
    if (n == 0) throw DataError("pagerank of an empty graph");
    if (damping < 0.0 || damping >= 1.0)
        throw DataError("pagerank damping must lie in [0, 1)");

    // Every node has >= 1 edge, so all strengths are positive (no dangling).
    Eigen::VectorXd strength = abs_strengths(g);
    Eigen::VectorXd x = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
    Eigen::VectorXd next(n);
    const double teleport = (1.0 - damping) / static_cast<double>(n);
    double residual = 1.0;
    for (int it = 0; it < kPowerMaxIter; ++it) {
        next.setConstant(teleport);
        for (const auto& e : g.edges) {
            const double w = std::abs(e.weight);
            next[e.target] += damping * w / strength[e.source] * x[e.source];
            next[e.source] += damping * w / strength[e.target] * x[e.target];
        }
        residual = (next - x).lpNorm<1>();
        x.swap(next);
        if (residual <= kPowerTol) {
            x /= x.sum();
            return x;
        }
    }
    throw ConvergenceError("pagerank power iteration hit the iteration limit", residual,
                           kPowerMaxIter);
}

std::map<std::string, double> pagerank(const StockGraph& g, double damping) {
    return zip_nodes(g, pagerank_values(g, damping));
}

Eigen::VectorXd clustering_values(const StockGraph& g, ClusteringMode mode) {
    const Eigen::Index n = static_cast<Eigen::Index>(g.n_nodes());
    Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
    if (g.edges.empty()) return out;

    double max_w = 0.0;
    for (const auto& e : g.edges) max_w = std::max(max_w, std::abs(e.weight));
    if (max_w == 0.0) return out;

    const auto adj = g.adjacency();
    auto find_weight = [&adj](int a, int b, double& w) {
        const auto& nbrs = adj[static_cast<std::size_t>(a)];
        auto it = std::lower_bound(nbrs.begin(), nbrs.end(), b,
                                   [](const auto& p, int v) { return p.first < v; });
        if (it == nbrs.end() || it->first != b) return false;
        w = it->second;
        return true;
    };

    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& nbrs = adj[static_cast<std::size_t>(i)];
        const std::size_t k = nbrs.size();
        if (k < 2) continue;
        double acc = 0.0;
        for (std::size_t a = 0; a < k; ++a)
            for (std::size_t b = a + 1; b < k; ++b) {
                double w_jk;
                if (!find_weight(nbrs[a].first, nbrs[b].first, w_jk)) continue;
                if (mode == ClusteringMode::binary) {
                    acc += 1.0;
                } else {
                    acc += std::cbrt(std::abs(nbrs[a].second) / max_w *
                                     (std::abs(nbrs[b].second) / max_w) *
                                     (std::abs(w_jk) / max_w));
                }
            }
        out[i] = 2.0 * acc / (static_cast<double>(k) * static_cast<double>(k - 1));
    }
    return out;
}

std::map<std::string, double> local_clustering(const StockGraph& g, ClusteringMode mode) {
    return zip_nodes(g, clustering_values(g, mode));
}

std::map<std::string, int> louvain_communities(const StockGraph& g, std::uint64_t seed) {
    return zip_nodes(g, louvain_labels(g, seed));
}

double modularity_of_labels(const StockGraph& g, const std::vector<int>& labels) {
    if (labels.size() != g.n_nodes())
        throw DataError("partition covers " + std::to_string(labels.size()) + " of " +
                        std::to_string(g.n_nodes()) + " nodes");
    double m = 0.0;
    for (const auto& e : g.edges) m += std::abs(e.weight);
    if (m <= 0.0) return 0.0;

    int max_label = 0;
    for (int l : labels) max_label = std::max(max_label, l);
    std::vector<double> sum_in(static_cast<std::size_t>(max_label) + 1, 0.0);
    std::vector<double> sum_tot(static_cast<std::size_t>(max_label) + 1, 0.0);
    for (const auto& e : g.edges) {
        const double w = std::abs(e.weight);
        const int cs = labels[static_cast<std::size_t>(e.source)];
        const int ct = labels[static_cast<std::size_t>(e.target)];
        if (cs == ct) sum_in[static_cast<std::size_t>(cs)] += 2.0 * w;
        sum_tot[static_cast<std::size_t>(cs)] += w;
        sum_tot[static_cast<std::size_t>(ct)] += w;
    }
    double q = 0.0;
    for (std::size_t c = 0; c < sum_tot.size(); ++c) {
        const double frac = sum_tot[c] / (2.0 * m);
        q += sum_in[c] / (2.0 * m) - frac * frac;
    }
    return q;
}

double modularity(const StockGraph& g, const std::map<std::string, int>& partition) {
    std::vector<int> labels(g.n_nodes());
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        auto it = partition.find(g.nodes[i]);
        if (it == partition.end())
            throw DataError("partition is missing node " + g.nodes[i]);
        labels[i] = it->second;
    }
    return modularity_of_labels(g, labels);
}

std::vector<NodeStats> node_stats(const StockGraph& g, std::uint64_t louvain_seed) {
    const auto deg = degree_values(g);
    const auto eig = eigencentrality_values(g);
    const auto pr = pagerank_values(g);
    const auto clus = clustering_values(g, ClusteringMode::geometric_weighted);
    const auto comm = louvain_labels(g, louvain_seed);

    std::vector<NodeStats> out(g.n_nodes());
    for (std::size_t i = 0; i < g.n_nodes(); ++i) {
        out[i].ticker = g.nodes[i];
        out[i].degree = deg[i];
        out[i].eigencentrality = eig[static_cast<Eigen::Index>(i)];
        out[i].pagerank = pr[static_cast<Eigen::Index>(i)];
        out[i].clustering = clus[static_cast<Eigen::Index>(i)];
        out[i].community = comm[i];
    }
    return out;
}

std::string edges_to_csv(const StockGraph& g) {
    std::string out = "source,target,weight\n";
    for (const auto& e : g.edges) {
        out += g.nodes[static_cast<std::size_t>(e.source)];
        out += ',';
        out += g.nodes[static_cast<std::size_t>(e.target)];
        out += ',';
        out += csv::format_double(e.weight);
        out += '\n';
    }
    return out;
}

std::string nodes_to_csv(const std::vector<NodeStats>& stats,
                         const std::map<std::string, std::string>& sectors) {
    std::string out = "ticker,degree,eigencentrality,pagerank,clustering,community,sector\n";
    for (const auto& s : stats) {
        auto it = sectors.find(s.ticker);
        out += s.ticker;
        out += ',';
        out += std::to_string(s.degree);
        out += ',';
        out += csv::format_double(s.eigencentrality);
        out += ',';
        out += csv::format_double(s.pagerank);
        out += ',';
        out += csv::format_double(s.clustering);
        out += ',';
        out += std::to_string(s.community);
        out += ',';
        out += it == sectors.end() ? std::string("UNKNOWN") : it->second;
        out += '\n';
    }
    return out;
}

StockGraph graph_from_edge_csv(std::string_view csv_text, double rho_c) {
    auto rows = csv::parse(csv_text);
    if (rows.empty()) throw FormatError("edge csv is empty");
    if (rows[0].size() != 3 || rows[0][0] != "source" || rows[0][1] != "target" ||
        rows[0][2] != "weight")
        throw FormatError("edge csv header must be 'source,target,weight'", 1, 1);

    std::set<std::string> names;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        if (rows[r].size() != 3) throw FormatError("edge row needs 3 fields", r + 1, 1);
        names.insert(rows[r][0]);
        names.insert(rows[r][1]);
    }

    StockGraph g;
    g.rho_c = rho_c;
    g.nodes.assign(names.begin(), names.end());
    std::map<std::string, int> index;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) index[g.nodes[i]] = static_cast<int>(i);

    for (std::size_t r = 1; r < rows.size(); ++r) {
        GraphEdge e;
        e.source = index[rows[r][0]];
        e.target = index[rows[r][1]];
        if (e.source == e.target)
            throw DataError("self-loop on " + rows[r][0] + " in edge csv");
        if (e.source > e.target) std::swap(e.source, e.target);
        e.weight = csv::parse_double(rows[r][2], r + 1, 3);
        g.edges.push_back(e);
    }
    return g;
}

}  // namespace marketnet
