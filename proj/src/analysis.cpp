#include "sybil/analysis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>

#include "sybil/errors.hpp"
#include "sybil/rng.hpp"

namespace sybil {

namespace {

int ceil_log2(std::uint64_t n) {
    if (n <= 1) return 0;
    return 64 - std::countl_zero(n - 1);
}

// y = W x for the residual weight matrix.
void apply_weight(const Graph& g, const EdgeWeighting& w,
                  const std::vector<double>& x, std::vector<double>& y) {
    const std::size_t n = g.node_count();
    if (w.kind == EdgeWeighting::Kind::Constant) {
        for (std::size_t u = 0; u < n; ++u) {
            double acc = 0.0;
            for (NodeId v : g.neighbors(static_cast<NodeId>(u))) acc += x[v];
            y[u] = w.constant_w_hat * acc;
        }
    } else {
        for (std::size_t u = 0; u < n; ++u) {
            const auto row = g.neighbors(static_cast<NodeId>(u));
            double acc = 0.0;
            for (NodeId v : row) acc += x[v];
            y[u] = row.empty() ? 0.0
                               : acc / (2.0 * static_cast<double>(row.size()));
        }
    }
}

}  // namespace

double inf_norm_weight(const Graph& g, const EdgeWeighting& weighting) {
    if (weighting.kind == EdgeWeighting::Kind::DegreeNormalized) return 0.5;
    return weighting.constant_w_hat * static_cast<double>(g.max_degree());
}

SpectralEstimate spectral_radius(const Graph& g,
                                 const EdgeWeighting& weighting, double tol,
                                 int max_iters) {
    if (g.node_count() == 0) throw_usage("spectral_radius: empty graph");
    const std::size_t n = g.node_count();
    if (g.edge_count() == 0) return {0.0, 0, true};

    // Shift so that eigenvalues lambda_i + c all have the Perron value as the
    // strict absolute maximum even when the spectrum is symmetric
    // (bipartite components).
    const double shift = std::max(0.25 * inf_norm_weight(g, weighting), 1e-6);

    std::vector<double> x(n, 1.0 / std::sqrt(static_cast<double>(n)));
    std::vector<double> wx(n, 0.0);
    double prev_rq = 0.0;

    SpectralEstimate est;
    for (int t = 1; t <= max_iters; ++t) {
        apply_weight(g, weighting, x, wx);
        double rq = 0.0;
        for (std::size_t i = 0; i < n; ++i) rq += x[i] * wx[i];
        est.value = std::max(rq, 0.0);
        est.iterations = t;
        if (t > 1 && std::abs(rq - prev_rq) < tol) {
            est.converged = true;
            break;
        }
        prev_rq = rq;

        double norm_sq = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            wx[i] += shift * x[i];
            norm_sq += wx[i] * wx[i];
        }
        const double inv_norm = 1.0 / std::sqrt(norm_sq);
        for (std::size_t i = 0; i < n; ++i) x[i] = wx[i] * inv_norm;
    }
    return est;
}

double suggest_constant_weight(const Graph& g, bool use_avg) {
    if (g.edge_count() == 0)
        throw_data("cannot suggest a constant weight for an edgeless graph");
    const double denom =
        use_avg ? g.avg_degree() : static_cast<double>(g.max_degree());
    return 1.0 / (2.0 * denom);
}

ConvergenceReport convergence_report(const Graph& g,
                                     const EdgeWeighting& weighting,
                                     double tol, int max_iters) {
    ConvergenceReport report;
    report.inf_norm = inf_norm_weight(g, weighting);
    const auto est = spectral_radius(g, weighting, tol, max_iters);
    report.spectral_radius_estimate = est.value;
    report.iterations_used = est.iterations;
    report.power_converged = est.converged;
    report.sufficient_ok = report.inf_norm < 0.5;
    report.necessary_ok = report.spectral_radius_estimate < 0.5;
    return report;
}

BoundReport security_bound(const SybilInstance& inst) {
    BoundReport report;
    report.node_count = inst.graph.node_count();
    report.attack_edges = inst.attack_edges.size();

    const auto sybils = inst.truth.nodes_with(Label::Sybil);
    if (sybils.empty()) throw_data("security_bound: no Sybil nodes in instance");
    report.avg_sybil_degree =
        static_cast<double>(volume(inst.graph, sybils)) /
        static_cast<double>(sybils.size());

    if (report.attack_edges == 0) {
        report.bound = 0.0;
        return report;
    }
    report.bound = 2.0 * static_cast<double>(report.attack_edges) *
                   static_cast<double>(ceil_log2(report.node_count)) /
                   report.avg_sybil_degree;
    return report;
}

std::vector<double> residual_l1_trajectory(const Graph& g,
                                           std::span<const double> q_hat,
                                           const EdgeWeighting& weighting,
                                           int iters) {
    const std::size_t n = g.node_count();
    if (q_hat.size() != n) throw_usage("prior vector size does not match node count");
    std::vector<double> prev(q_hat.begin(), q_hat.end());
    std::vector<double> cur(n, 0.0);
    std::vector<double> norms;
    norms.reserve(static_cast<std::size_t>(std::max(iters, 0)));
    for (int t = 1; t <= iters; ++t) {
        scar_step(g, q_hat, prev, weighting, cur);
        std::swap(prev, cur);
        double norm = 0.0;
        for (double v : prev) norm += std::abs(v);
        norms.push_back(norm);
    }
    return norms;
}

MixingSimResult benign_mixing_sim(RegionModel model, std::uint32_t n,
                                  double avg_degree, std::uint64_t g,
                                  std::uint32_t n_seeds, std::uint64_t seed) {
    if (n_seeds > n) throw_usage("mixing sim: more seeds than benign nodes");

    auto region = [&](std::uint64_t region_seed) {
        if (model == RegionModel::Er) return er_graph(n, avg_degree, region_seed);
        const auto m = static_cast<std::uint32_t>(
            std::max(1.0, std::round(avg_degree / 2.0)));
        return pa_graph(n, m, region_seed);
    };
    const Graph benign = region(mix_seed(seed, 1));
    const Graph sybil_region = region(mix_seed(seed, 2));
    const SybilInstance inst =
        join_regions(benign, sybil_region, {g, mix_seed(seed, 3)});

    // Label n_seeds benign nodes uniformly at random.
    std::vector<NodeId> pool(n);
    std::iota(pool.begin(), pool.end(), NodeId{0});
    Rng rng(mix_seed(seed, 4));
    rng.partial_shuffle(pool, n_seeds);
    std::vector<bool> labeled(inst.graph.node_count(), false);
    for (std::uint32_t i = 0; i < n_seeds; ++i) labeled[pool[i]] = true;

    const std::size_t total = inst.graph.node_count();
    constexpr double kTheta = 0.1;
    std::vector<double> prev(total, 0.0);
    for (std::uint32_t i = 0; i < n_seeds; ++i) prev[pool[i]] = -kTheta;

    // Priors injected only at initialization; each step replaces a node's
    // residual with the average of its neighbors'.
    MixingSimResult result;
    result.iterations = ceil_log2(total);
    std::vector<double> cur(total, 0.0);
    for (int t = 0; t < result.iterations; ++t) {
        for (std::size_t u = 0; u < total; ++u) {
            const auto row = inst.graph.neighbors(static_cast<NodeId>(u));
            if (row.empty()) {
                cur[u] = 0.0;
                continue;
            }
            double acc = 0.0;
            for (NodeId v : row) acc += prev[v];
            cur[u] = acc / static_cast<double>(row.size());
        }
        std::swap(prev, cur);
    }

    for (NodeId u = 0; u < n; ++u)
        if (!labeled[u]) result.unlabeled_benign_residuals.push_back(prev[u]);
    result.final_residuals = prev;

    const auto& res = result.unlabeled_benign_residuals;
    if (!res.empty()) {
        const double mean =
            std::accumulate(res.begin(), res.end(), 0.0) /
            static_cast<double>(res.size());
        double var = 0.0;
        for (double v : res) var += (v - mean) * (v - mean);
        var /= static_cast<double>(res.size());
        result.coeff_variation =
            mean == 0.0 ? std::numeric_limits<double>::infinity()
                        : std::sqrt(var) / std::abs(mean);
        result.all_negative =
            std::all_of(res.begin(), res.end(), [](double v) { return v < 0.0; });
    }

    const auto benign_nodes = inst.truth.nodes_with(Label::Benign);
    const auto sybil_nodes = inst.truth.nodes_with(Label::Sybil);
    const double vol_b = static_cast<double>(volume(inst.graph, benign_nodes));
    const double vol_s = static_cast<double>(volume(inst.graph, sybil_nodes));
    result.c_benign = vol_b > 0.0 ? static_cast<double>(g) / vol_b : 0.0;
    result.c_sybil = vol_s > 0.0 ? static_cast<double>(g) / vol_s : 0.0;
    return result;
}

}  // namespace sybil
