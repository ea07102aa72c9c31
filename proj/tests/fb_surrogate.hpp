#pragma once

#include <cstdlib>
#include <filesystem>

#include "sybil/generate.hpp"
#include "sybil/graph.hpp"
#include "sybil/rng.hpp"

namespace testutil {

// Benign region at the SNAP Facebook scale (4039 nodes, ~88k edges, average
// degree ~44). When the real edge list is available it is used directly;
// otherwise a community-structured stand-in is synthesized: three "villages"
// per region, each a dense ER core with clique periphery anchored into it,
// cores joined by a sparse backbone, plus a thin global overlay. The shape is
// tuned so the propagation dynamics reproduce the reference behavior of the
// real graph (dense saturating cores, slow inter-community mixing, spectral
// radius ~120 at unit edge weight).
inline sybil::Graph facebook_region(std::uint64_t seed = 1) {
    const char* env = std::getenv("SYBILSCAR_FACEBOOK_EDGES");
    if (env && std::filesystem::exists(env))
        return sybil::load_edge_list(env).graph;
    const auto local =
        std::filesystem::path(__FILE__).parent_path() / "data" /
        "facebook_combined.txt";
    if (std::filesystem::exists(local))
        return sybil::load_edge_list(local).graph;

    using sybil::Edge;
    using sybil::NodeId;
    using sybil::mix_seed;

    const NodeId n = 4039;
    const int n_villages = 3;
    const NodeId core_n = 170;
    const double core_avg = 120.0;
    const NodeId clique_n = 34;
    const double clique_avg = 20.0;
    const int anchors = 6;
    const int backbone = 40;

    std::vector<Edge> edges;
    std::vector<NodeId> core_base;
    NodeId base = 0;
    std::uint64_t salt = 100;
    sybil::Rng rng(mix_seed(seed, 2));
    const NodeId village_n = n / n_villages;
    for (int v = 0; v < n_villages; ++v) {
        const NodeId vbase = base;
        core_base.push_back(vbase);
        const NodeId vn = (v == n_villages - 1) ? (n - base) : village_n;
        sybil::Graph core = sybil::er_graph(core_n, core_avg, mix_seed(seed, salt++));
        for (auto [a, b] : core.edges()) edges.emplace_back(a + vbase, b + vbase);
        base += core_n;
        while (base - vbase < vn) {
            const NodeId cn = std::min<NodeId>(clique_n, vn - (base - vbase));
            if (cn >= 2) {
                sybil::Graph cl = sybil::er_graph(
                    cn, std::min<double>(clique_avg, cn - 1), mix_seed(seed, salt++));
                for (auto [a, b] : cl.edges()) edges.emplace_back(a + base, b + base);
            }
            for (NodeId u = 0; u < cn; ++u)
                for (int a = 0; a < anchors; ++a)
                    edges.emplace_back(base + u,
                                       vbase + static_cast<NodeId>(rng.below(core_n)));
            base += cn;
        }
    }
    for (std::size_t i = 0; i < core_base.size(); ++i)
        for (std::size_t j = i + 1; j < core_base.size(); ++j)
            for (int k = 0; k < backbone; ++k)
                edges.emplace_back(
                    core_base[i] + static_cast<NodeId>(rng.below(core_n)),
                    core_base[j] + static_cast<NodeId>(rng.below(core_n)));
    sybil::Graph overlay = sybil::er_graph(n, 1.0, mix_seed(seed, 3));
    for (auto [u, v] : overlay.edges()) edges.emplace_back(u, v);
    return sybil::Graph::from_edges(n, std::move(edges));
}

}  // namespace testutil
