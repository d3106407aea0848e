#ifndef MARKETNET_CORRNET_HPP
#define MARKETNET_CORRNET_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "marketnet/market_data.hpp"

namespace marketnet {

/// Pearson correlation matrix of a stock universe. Symmetric, unit diagonal,
/// positive semi-definite up to numerical tolerance.
struct CorrMatrix {
    std::vector<std::string> tickers;
    Eigen::MatrixXd values;  // N x N

    Eigen::Index size() const { return values.rows(); }
};

struct GraphEdge {
    int source = 0;  // node indices with source < target
    int target = 0;
    double weight = 0.0;  // signed correlation
};

/// Undirected graph of stocks whose pairwise |correlation| clears rho_c.
/// Isolated tickers are excluded; each unordered pair is stored once.
/// Algorithms that need non-negative weights take |weight| themselves.
struct StockGraph {
    std::vector<std::string> nodes;
    std::vector<GraphEdge> edges;
    double rho_c = 0.0;

    std::size_t n_nodes() const { return nodes.size(); }
    std::size_t n_edges() const { return edges.size(); }

    /// Adjacency lists (neighbor, signed weight), sorted by neighbor index.
    std::vector<std::vector<std::pair<int, double>>> adjacency() const;

    int index_of(const std::string& ticker) const;  // -1 when absent
};

enum class ClusteringMode {
    binary,             // triangle count over possible neighbor pairs
    geometric_weighted  // triangle intensity, weights scaled by the graph max
};

/// Per-node network statistics; clustering is the geometric-weighted variant.
struct NodeStats {
    std::string ticker;
    int degree = 0;
    double eigencentrality = 0.0;
    double pagerank = 0.0;
    double clustering = 0.0;
    int community = -1;
};

/// Pearson correlation of the return columns. Throws DataError naming the
/// ticker when a column has zero variance.
CorrMatrix correlation_matrix(const ReturnPanel& returns);

/// Keep the off-diagonal pairs with |C_ij| >= rho_c (0 <= rho_c <= 1).
/// Empty graphs are allowed.
StockGraph threshold_graph(const CorrMatrix& corr, double rho_c);

std::map<std::string, int> degree_sequence(const StockGraph& g);

/// Principal eigenvector of the |weight| adjacency matrix, non-negative
/// entries, unit Euclidean norm. Power iteration to relative tolerance 1e-10;
/// throws ConvergenceError after 10000 iterations.
std::map<std::string, double> eigenvector_centrality(const StockGraph& g);

/// PageRank on |weight| edges used as symmetric transition structure.
/// Power iteration to L1 tolerance 1e-10; result sums to 1.
std::map<std::string, double> pagerank(const StockGraph& g, double damping = 0.85);

/// Local clustering coefficient per node; nodes of degree < 2 get 0.
std::map<std::string, double> local_clustering(const StockGraph& g, ClusteringMode mode);

/// Louvain modularity maximization on |weight| edges at resolution 1.
/// Node visit order is shuffled by the seed; moves are first-improvement,
/// candidate communities scanned in ascending label order. Labels 0..k-1 in
/// order of first occurrence along the node list.
std::map<std::string, int> louvain_communities(const StockGraph& g, std::uint64_t seed);

/// Newman modularity of a partition on |weight| edges, in [-0.5, 1].
/// Throws DataError when the partition misses a node.
double modularity(const StockGraph& g, const std::map<std::string, int>& partition);

/// All node statistics in one pass, aligned with g.nodes.
std::vector<NodeStats> node_stats(const StockGraph& g, std::uint64_t louvain_seed);

/// Vector forms aligned with g.nodes (the map operations wrap these).
std::vector<int> degree_values(const StockGraph& g);
Eigen::VectorXd eigencentrality_values(const StockGraph& g);
Eigen::VectorXd pagerank_values(const StockGraph& g, double damping = 0.85);
Eigen::VectorXd clustering_values(const StockGraph& g, ClusteringMode mode);
std::vector<int> louvain_labels(const StockGraph& g, std::uint64_t seed);
double modularity_of_labels(const StockGraph& g, const std::vector<int>& labels);

/// Edge-list CSV `source,target,weight` (tickers, shortest-round-trip doubles).
std::string edges_to_csv(const StockGraph& g);

/// Node-attribute CSV `ticker,degree,eigencentrality,pagerank,clustering,community,sector`.
std::string nodes_to_csv(const std::vector<NodeStats>& stats,
                         const std::map<std::string, std::string>& sectors);

/// Rebuild a StockGraph from edge-list CSV text. Node order is lexicographic,
/// so the result is equivalent to the exported graph up to node relabeling.
StockGraph graph_from_edge_csv(std::string_view csv_text, double rho_c = 0.0);

}  // namespace marketnet

#endif  // MARKETNET_CORRNET_HPP
