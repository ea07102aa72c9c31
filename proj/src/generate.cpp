#include "sybil/generate.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "sybil/errors.hpp"
#include "sybil/rng.hpp"

namespace sybil {

namespace {

// g distinct cross pairs (b, s) with b in [0, nb), s in [0, ns), uniform over
// all nb*ns pairs. Pairs are encoded as b*ns + s.
std::vector<std::uint64_t> sample_cross_pairs(std::uint64_t nb,
                                              std::uint64_t ns,
                                              std::uint64_t g, Rng& rng) {
    const std::uint64_t total = nb * ns;
    if (g > total)
        throw_usage("attack edge count " + std::to_string(g) +
                    " exceeds the " + std::to_string(total) +
                    " possible cross-region pairs");
    std::vector<std::uint64_t> picked;
    picked.reserve(g);
    if (total <= (1ULL << 25) && (g >= total / 4 || total <= (1ULL << 16))) {
        // Small pair space: materialize and partially shuffle.
        std::vector<std::uint64_t> pool(total);
        for (std::uint64_t i = 0; i < total; ++i) pool[i] = i;
        rng.partial_shuffle(pool, g);
        picked.assign(pool.begin(), pool.begin() + g);
    } else if (g <= total / 2) {
        std::unordered_set<std::uint64_t> seen;
        seen.reserve(g * 2);
        while (picked.size() < g) {
            const std::uint64_t code = rng.below(total);
            if (seen.insert(code).second) picked.push_back(code);
        }
    } else {
        // Dense request over a huge pair space: sample the complement.
        std::unordered_set<std::uint64_t> excluded;
        excluded.reserve((total - g) * 2);
        while (excluded.size() < total - g) excluded.insert(rng.below(total));
        for (std::uint64_t code = 0; code < total; ++code)
            if (!excluded.contains(code)) picked.push_back(code);
    }
    std::sort(picked.begin(), picked.end());
    return picked;
}

SybilInstance join_impl(const Graph& benign, const Graph& sybil_region,
                        const AttackConfig& cfg) {
    const NodeId nb = benign.node_count();
    const NodeId ns = sybil_region.node_count();
    const NodeId n = nb + ns;

    std::vector<Edge> edges = benign.edges();
    edges.reserve(benign.edge_count() + sybil_region.edge_count() +
                  cfg.attack_edges);
    for (const auto& [u, v] : sybil_region.edges())
        edges.emplace_back(u + nb, v + nb);

    Rng rng(cfg.seed);
    SybilInstance inst;
    for (std::uint64_t code : sample_cross_pairs(nb, ns, cfg.attack_edges, rng)) {
        const auto b = static_cast<NodeId>(code / ns);
        const auto s = static_cast<NodeId>(nb + code % ns);
        inst.attack_edges.emplace_back(b, s);
        edges.emplace_back(b, s);
    }

    inst.graph = Graph::from_edges(n, std::move(edges));
    inst.truth.labels.assign(n, Label::Sybil);
    std::fill(inst.truth.labels.begin(), inst.truth.labels.begin() + nb,
              Label::Benign);
    return inst;
}

}  // namespace

SybilInstance replica_attack(const Graph& benign, const AttackConfig& cfg) {
    if (benign.node_count() < 2)
        throw_usage("replica_attack requires a benign region with >= 2 nodes");
    return join_impl(benign, benign, cfg);
}

SybilInstance join_regions(const Graph& benign, const Graph& sybil_region,
                           const AttackConfig& cfg) {
    if (benign.node_count() == 0 || sybil_region.node_count() == 0)
        throw_usage("join_regions requires two non-empty regions");
    return join_impl(benign, sybil_region, cfg);
}

Graph er_graph(std::uint32_t n, double avg_degree, std::uint64_t seed) {
    if (n < 2) throw_usage("er_graph requires n >= 2");
    if (!(avg_degree > 0.0 && avg_degree <= static_cast<double>(n) - 1.0))
        throw_usage("er_graph requires 0 < avg_degree <= n - 1");
    const double p = avg_degree / (static_cast<double>(n) - 1.0);

    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(avg_degree * n / 2 * 1.1) + 16);
    const std::uint64_t total =
        static_cast<std::uint64_t>(n) * (n - 1) / 2;
    Rng rng(seed);

    if (p >= 1.0) {
        for (NodeId u = 0; u < n; ++u)
            for (NodeId v = u + 1; v < n; ++v) edges.emplace_back(u, v);
    } else {
        // Geometric skipping over the linearized pair index: O(|E|) instead
        // of O(n^2) Bernoulli trials.
        const double log1mp = std::log1p(-p);
        std::uint64_t k = 0;
        bool first = true;
        const double two_n_minus_1 = 2.0 * n - 1.0;
        while (true) {
            const double u01 = rng.unit();
            const auto skip = static_cast<std::uint64_t>(
                std::floor(std::log1p(-u01) / log1mp));
            if (first) {
                if (skip >= total) break;
                k = skip;
                first = false;
            } else {
                if (skip + 1 > total - 1 - k) break;
                k += skip + 1;
            }
            // Invert k -> (i, j), i < j, lexicographic order; row i starts at
            // i*(2n-i-1)/2. Float estimate with an exact fix-up.
            const double disc =
                two_n_minus_1 * two_n_minus_1 - 8.0 * static_cast<double>(k);
            auto i = static_cast<std::uint64_t>(
                std::max(0.0, std::floor((two_n_minus_1 - std::sqrt(disc)) / 2.0)));
            auto row_start = [&](std::uint64_t r) {
                return r * (2 * static_cast<std::uint64_t>(n) - r - 1) / 2;
            };
            while (i + 1 < n && row_start(i + 1) <= k) ++i;
            while (i > 0 && row_start(i) > k) --i;
            const std::uint64_t j = i + 1 + (k - row_start(i));
            edges.emplace_back(static_cast<NodeId>(i), static_cast<NodeId>(j));
        }
    }
    return Graph::from_edges(n, std::move(edges));
}

Graph pa_graph(std::uint32_t n, std::uint32_t m, std::uint64_t seed) {
    if (m < 1 || n <= m) throw_usage("pa_graph requires n > m >= 1");

    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(m) * (n - m - 1) +
                  static_cast<std::size_t>(m) * (m + 1) / 2);
    std::vector<NodeId> endpoint_pool;
    endpoint_pool.reserve(2 * edges.capacity());

    for (NodeId u = 0; u <= m; ++u) {
        for (NodeId v = u + 1; v <= m; ++v) {
            edges.emplace_back(u, v);
            endpoint_pool.push_back(u);
            endpoint_pool.push_back(v);
        }
    }

    Rng rng(seed);
    std::vector<NodeId> targets;
    targets.reserve(m);
    for (NodeId v = m + 1; v < n; ++v) {
        targets.clear();
        while (targets.size() < m) {
            const NodeId t = endpoint_pool[rng.below(endpoint_pool.size())];
            if (std::find(targets.begin(), targets.end(), t) == targets.end())
                targets.push_back(t);
        }
        for (NodeId t : targets) {
            edges.emplace_back(v, t);
            endpoint_pool.push_back(v);
            endpoint_pool.push_back(t);
        }
    }
    return Graph::from_edges(n, std::move(edges));
}

}  // namespace sybil
