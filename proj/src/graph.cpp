#include "wsnsis/graph.hpp"

#include "wsnsis/error.hpp"
#include "wsnsis/rng.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>

namespace wsnsis {

bool Graph::has_edge(NodeId i, NodeId j) const {
    auto nb = neighbors(i);
    return std::binary_search(nb.begin(), nb.end(), j);
}

std::vector<Edge> Graph::edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count());
    for (NodeId i = 0; i < node_count(); ++i) {
        for (NodeId j : neighbors(i)) {
            if (i < j) out.emplace_back(i, j);
        }
    }
    return out;
}

Graph build_from_edges(std::size_t n, std::span<const Edge> edges) {
    if (n == 0) throw ValidationError("graph must have at least one node");
    if (n > std::numeric_limits<NodeId>::max()) throw ValidationError("graph too large");

    std::vector<Edge> directed;
    directed.reserve(edges.size() * 2);
    for (auto [i, j] : edges) {
        if (i >= n || j >= n) {
            std::ostringstream msg;
            msg << "edge (" << i << ", " << j << ") has an endpoint outside [0, " << n << ")";
            throw ValidationError(msg.str());
        }
        if (i == j) {
            std::ostringstream msg;
            msg << "edge (" << i << ", " << j << ") is a self-loop";
            throw ValidationError(msg.str());
        }
        directed.emplace_back(i, j);
        directed.emplace_back(j, i);
    }
    std::sort(directed.begin(), directed.end());
    directed.erase(std::unique(directed.begin(), directed.end()), directed.end());

    Graph g;
    g.offsets_.assign(n + 1, 0);
    g.targets_.reserve(directed.size());
    for (auto [i, j] : directed) {
        ++g.offsets_[i + 1];
        g.targets_.push_back(j);
    }
    std::partial_sum(g.offsets_.begin(), g.offsets_.end(), g.offsets_.begin());
    return g;
}

Graph generate_price(std::size_t n, std::size_t m, std::uint64_t seed) {
    if (m < 1) throw ValidationError("price graph: m must be at least 1");
    if (n <= m) {
        std::ostringstream msg;
        msg << "price graph: n (" << n << ") must exceed m (" << m << ")";
        throw ValidationError(msg.str());
    }

    Rng rng(seed);
    std::vector<Edge> edges;
    edges.reserve(m * (m + 1) / 2 + (n - m - 1) * m);
    // Each node appears here once per incident edge end.
    std::vector<NodeId> endpoints;
    endpoints.reserve(2 * edges.capacity());

    for (NodeId i = 0; i <= m; ++i) {
        for (NodeId j = i + 1; j <= m; ++j) {
            edges.emplace_back(i, j);
            endpoints.push_back(i);
            endpoints.push_back(j);
        }
    }

    std::vector<NodeId> targets;
    targets.reserve(m);
    for (auto node = static_cast<NodeId>(m + 1); node < n; ++node) {
        targets.clear();
        while (targets.size() < m) {
            // Weight of node x is degree(x) + 1: the endpoint list carries the
            // degree part, a uniform pick over existing nodes the offset.
            const std::uint64_t total = endpoints.size() + node;
            const std::uint64_t r = uniform_index(rng, total);
            const NodeId t = r < endpoints.size() ? endpoints[r] : static_cast<NodeId>(r - endpoints.size());
            if (std::find(targets.begin(), targets.end(), t) == targets.end()) targets.push_back(t);
        }
        for (NodeId t : targets) {
            edges.emplace_back(t, node);
            endpoints.push_back(t);
            endpoints.push_back(node);
        }
    }
    return build_from_edges(n, edges);
}

Graph induced_subgraph(const Graph& g, std::span<const NodeId> nodes) {
    std::vector<std::int64_t> relabel(g.node_count(), -1);
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        if (nodes[k] >= g.node_count()) throw ValidationError("induced_subgraph: node out of range");
        relabel[nodes[k]] = static_cast<std::int64_t>(k);
    }
    std::vector<Edge> edges;
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        for (NodeId j : g.neighbors(nodes[k])) {
            if (relabel[j] > static_cast<std::int64_t>(k)) {
                edges.emplace_back(static_cast<NodeId>(k), static_cast<NodeId>(relabel[j]));
            }
        }
    }
    return build_from_edges(nodes.size(), edges);
}

namespace {

void multiply(const Graph& g, std::span<const double> x, std::span<double> y) {
    for (NodeId i = 0; i < g.node_count(); ++i) {
        double s = 0.0;
        for (NodeId j : g.neighbors(i)) s += x[j];
        y[i] = s;
    }
}

double norm2(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

} // namespace

SpectralResult largest_real_eigenvalue(const Graph& g, double tol, std::size_t max_iter) {
    if (g.node_count() == 0) throw ValidationError("largest_real_eigenvalue: empty graph");
    if (!(tol > 0.0)) throw ValidationError("largest_real_eigenvalue: tol must be positive");

    const std::size_t n = g.node_count();
    SpectralResult result;
    result.eigenvector.assign(n, 1.0 / std::sqrt(static_cast<double>(n)));
    if (g.edge_count() == 0) return result;

    std::vector<double>& x = result.eigenvector;
    std::vector<double> ax(n);
    for (std::size_t it = 1; it <= max_iter; ++it) {
        multiply(g, x, ax);
        double lambda = 0.0;
        for (std::size_t i = 0; i < n; ++i) lambda += x[i] * ax[i];
        double residual = 0.0;
        for (std::size_t i = 0; i < n; ++i) residual = std::max(residual, std::abs(ax[i] - lambda * x[i]));

        result.lambda_max = lambda;
        result.residual = residual;
        result.iterations = it;
        if (residual <= tol) return result;

        // x <- (A + I) x, normalized
        for (std::size_t i = 0; i < n; ++i) ax[i] += x[i];
        const double norm = norm2(ax);
        for (std::size_t i = 0; i < n; ++i) x[i] = ax[i] / norm;
    }
    std::ostringstream msg;
    msg << "power iteration did not reach residual " << tol << " within " << max_iter
        << " iterations (last residual " << result.residual << ")";
    throw ConvergenceError(msg.str(), std::move(result.eigenvector), result.residual);
}

std::size_t component_count(const Graph& g) {
    const std::size_t n = g.node_count();
    std::vector<char> seen(n, 0);
    std::vector<NodeId> stack;
    std::size_t components = 0;
    for (NodeId s = 0; s < n; ++s) {
        if (seen[s]) continue;
        ++components;
        seen[s] = 1;
        stack.push_back(s);
        while (!stack.empty()) {
            NodeId i = stack.back();
            stack.pop_back();
            for (NodeId j : g.neighbors(i)) {
                if (!seen[j]) {
                    seen[j] = 1;
                    stack.push_back(j);
                }
            }
        }
    }
    return components;
}

DegreeStats degree_stats(const Graph& g) {
    DegreeStats stats;
    const std::size_t n = g.node_count();
    if (n == 0) return stats;
    for (NodeId i = 0; i < n; ++i) stats.max = std::max(stats.max, g.degree(i));
    stats.histogram.assign(stats.max + 1, 0);
    for (NodeId i = 0; i < n; ++i) ++stats.histogram[g.degree(i)];
    stats.mean = 2.0 * static_cast<double>(g.edge_count()) / static_cast<double>(n);
    stats.components = component_count(g);
    return stats;
}

void write_edge_list(std::ostream& out, const Graph& g) {
    out << "# nodes " << g.node_count() << '\n';
    for (auto [i, j] : g.edges()) out << i << ' ' << j << '\n';
}

void write_edge_list(const std::filesystem::path& path, const Graph& g) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    write_edge_list(out, g);
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

Graph read_edge_list(std::istream& in) {
    std::vector<Edge> edges;
    std::size_t declared = 0;
    std::size_t inferred = 0;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        if (line[first] == '#') {
            std::istringstream directive(line.substr(first + 1));
            std::string key;
            std::size_t value = 0;
            if (directive >> key && key == "nodes" && directive >> value) declared = value;
            continue;
        }
        std::istringstream fields(line);
        long long i = 0, j = 0;
        std::string rest;
        if (!(fields >> i >> j) || (fields >> rest) || i < 0 || j < 0 ||
            i > std::numeric_limits<NodeId>::max() || j > std::numeric_limits<NodeId>::max()) {
            throw ValidationError("edge list line " + std::to_string(line_no) + ": expected \"i j\" with non-negative integers");
        }
        edges.emplace_back(static_cast<NodeId>(i), static_cast<NodeId>(j));
        inferred = std::max<std::size_t>(inferred, static_cast<std::size_t>(std::max(i, j)) + 1);
    }
    return build_from_edges(declared ? declared : inferred, edges);
}

Graph read_edge_list(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open edge list " + path.string());
    return read_edge_list(in);
}

} // namespace wsnsis
