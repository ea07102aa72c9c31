#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace sybil {

using NodeId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;

// Immutable undirected graph in compressed adjacency (CSR) form. Neighbor
// rows are sorted, self-loop free and duplicate free; every edge appears in
// both endpoint rows. Copies share the underlying storage and are safe for
// concurrent reads.
class Graph {
public:
    Graph() = default;

    // Builds a graph over [0, node_count). Self-loops and duplicate edges in
    // `edges` are dropped; each pair is treated as one undirected edge.
    static Graph from_edges(NodeId node_count, std::vector<Edge> edges);

    std::uint32_t node_count() const { return d_ ? d_->node_count : 0; }
    std::uint64_t edge_count() const { return d_ ? d_->edge_count : 0; }

    std::span<const NodeId> neighbors(NodeId u) const {
        return {d_->adjacency.data() + d_->offsets[u],
                d_->adjacency.data() + d_->offsets[u + 1]};
    }
    std::uint32_t degree(NodeId u) const {
        return static_cast<std::uint32_t>(d_->offsets[u + 1] - d_->offsets[u]);
    }
    std::uint32_t max_degree() const { return d_ ? d_->max_degree : 0; }
    double avg_degree() const {
        return node_count() == 0
                   ? 0.0
                   : 2.0 * static_cast<double>(edge_count()) / node_count();
    }

    bool has_edge(NodeId u, NodeId v) const;

    // Undirected edge list, one entry per edge with first < second, sorted.
    std::vector<Edge> edges() const;

private:
    struct Data {
        std::uint32_t node_count = 0;
        std::uint64_t edge_count = 0;
        std::uint32_t max_degree = 0;
        std::vector<std::uint64_t> offsets;
        std::vector<NodeId> adjacency;
    };
    std::shared_ptr<const Data> d_;
};

struct GraphStats {
    std::uint32_t node_count = 0;
    std::uint64_t edge_count = 0;
    double avg_degree = 0.0;
    std::uint32_t max_degree = 0;
};

GraphStats stats(const Graph& g);

// Sum of degrees over the given nodes. Throws on an out-of-range id.
std::uint64_t volume(const Graph& g, std::span<const NodeId> nodes);

struct LoadedGraph {
    Graph graph;
    // external_ids[dense_id] = id as it appeared in the input file.
    std::vector<std::uint64_t> external_ids;
};

// Reads a whitespace-separated edge list ("u v" per line, '#' comments).
// External ids are remapped to dense NodeIds in order of first appearance;
// self-loops and duplicate edges are dropped.
LoadedGraph load_edge_list(const std::filesystem::path& path);

void save_edge_list(const Graph& g, const std::filesystem::path& path);

// Sidecar id map: "external_id dense_id" per line.
void save_id_map(const LoadedGraph& g, const std::filesystem::path& path);

}  // namespace sybil
