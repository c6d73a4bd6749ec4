#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

namespace wsnsis {

using NodeId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;

/// Immutable undirected simple graph in compressed sparse row form.
/// Neighbor lists are sorted, symmetric, free of duplicates and self-loops.
class Graph {
public:
    Graph() = default;

    std::size_t node_count() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
    std::size_t edge_count() const noexcept { return targets_.size() / 2; }

    std::span<const NodeId> neighbors(NodeId i) const {
        return {targets_.data() + offsets_[i], targets_.data() + offsets_[i + 1]};
    }
    std::size_t degree(NodeId i) const { return offsets_[i + 1] - offsets_[i]; }
    bool has_edge(NodeId i, NodeId j) const;

    /// Every edge once, as (i, j) with i < j, in lexicographic order.
    std::vector<Edge> edges() const;

    friend bool operator==(const Graph&, const Graph&) = default;

private:
    friend Graph build_from_edges(std::size_t n, std::span<const Edge> edges);

    std::vector<std::size_t> offsets_;
    std::vector<NodeId> targets_;
};

/// Symmetrizes and deduplicates `edges`. Throws ValidationError on an
/// out-of-range endpoint, a self-loop, or n == 0.
Graph build_from_edges(std::size_t n, std::span<const Edge> edges);

/// Price-style growth: starts from a clique on m+1 nodes, then every new node
/// attaches to m distinct existing nodes chosen with probability proportional
/// to degree + 1. Edges are undirected. Bit-reproducible for a given seed.
Graph generate_price(std::size_t n, std::size_t m, std::uint64_t seed);

/// Subgraph induced by `nodes`; node k of the result is nodes[k].
Graph induced_subgraph(const Graph& g, std::span<const NodeId> nodes);

struct SpectralResult {
    double lambda_max = 0.0;
    std::vector<double> eigenvector;
    double residual = 0.0;
    std::size_t iterations = 0;
};

/// Perron eigenpair of the adjacency matrix by power iteration on A + I.
/// The unit shift separates the Perron value from -lambda_max on bipartite
/// graphs. Converged when ||A x - lambda x||_inf <= tol for unit-norm x.
/// Throws ConvergenceError (carrying the last iterate) after max_iter steps.
SpectralResult largest_real_eigenvalue(const Graph& g, double tol = 1e-10,
                                       std::size_t max_iter = 100000);

struct DegreeStats {
    double mean = 0.0;
    std::size_t max = 0;
    std::vector<std::size_t> histogram; // histogram[k] = number of nodes with degree k
    std::size_t components = 0;
};

DegreeStats degree_stats(const Graph& g);

std::size_t component_count(const Graph& g);

// Edge-list text format: one "i j" pair per line, 0-indexed, '#' comments.
// The writer emits a leading "# nodes N" line so isolated trailing nodes
// survive a round trip; the reader honors it when present and otherwise uses
// the largest endpoint + 1.
void write_edge_list(std::ostream& out, const Graph& g);
void write_edge_list(const std::filesystem::path& path, const Graph& g);
Graph read_edge_list(std::istream& in);
Graph read_edge_list(const std::filesystem::path& path);

} // namespace wsnsis
