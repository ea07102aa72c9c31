#pragma once

#include <cstdint>
#include <vector>

#include "sybil/graph.hpp"
#include "sybil/labels.hpp"

namespace sybil {

struct AttackConfig {
    std::uint64_t attack_edges = 0;
    std::uint64_t seed = 0;
};

// A benchmark instance: benign region, Sybil region, and the attack edges
// connecting them. Node ids of the two regions are contiguous blocks
// ([0, |B|) benign, then Sybils) for generated instances; loaded instances
// may interleave.
struct SybilInstance {
    Graph graph;
    LabelSet truth;
    std::vector<Edge> attack_edges;
};

// Benign region plus an isomorphic copy of it as the Sybil region, connected
// by `cfg.attack_edges` cross edges drawn uniformly at random without
// replacement from all cross-region pairs.
SybilInstance replica_attack(const Graph& benign, const AttackConfig& cfg);

// Two independently supplied regions joined by random attack edges.
SybilInstance join_regions(const Graph& benign, const Graph& sybil_region,
                           const AttackConfig& cfg);

// G(n, p) with p = avg_degree / (n - 1).
Graph er_graph(std::uint32_t n, double avg_degree, std::uint64_t seed);

// Preferential attachment: a clique on m+1 nodes, then each new node attaches
// m edges to distinct existing nodes with probability proportional to degree.
// |E| = m*(n-m-1) + m*(m+1)/2.
Graph pa_graph(std::uint32_t n, std::uint32_t edges_per_node,
               std::uint64_t seed);

}  // namespace sybil
