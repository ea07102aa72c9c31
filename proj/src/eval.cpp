#include "sybil/eval.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "sybil/analysis.hpp"
#include "sybil/errors.hpp"
#include "sybil/io.hpp"
#include "sybil/rng.hpp"

namespace sybil {

AucResult auc(std::span<const double> scores, const LabelSet& truth,
              std::span<const NodeId> test_nodes) {
    struct Entry {
        double score;
        bool sybil;
    };
    std::vector<Entry> entries;
    entries.reserve(test_nodes.size());
    for (NodeId u : test_nodes) {
        if (u >= scores.size() || u >= truth.size())
            throw_data("auc: test node id out of range");
        if (truth[u] == Label::Unlabeled) continue;
        entries.push_back({scores[u], truth[u] == Label::Sybil});
    }

    AucResult result;
    for (const auto& e : entries) (e.sybil ? result.n_pos : result.n_neg)++;
    if (result.n_pos == 0 || result.n_neg == 0)
        throw_data("auc: test set must contain both classes");

    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return a.score < b.score; });

    // Rank-sum with average ranks for ties; equals pair counting with tied
    // pairs worth 1/2.
    double rank_sum_pos = 0.0;
    std::size_t i = 0;
    while (i < entries.size()) {
        std::size_t j = i;
        while (j < entries.size() && entries[j].score == entries[i].score) ++j;
        const double avg_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t k = i; k < j; ++k)
            if (entries[k].sybil) rank_sum_pos += avg_rank;
        i = j;
    }
    const double n_pos = static_cast<double>(result.n_pos);
    const double n_neg = static_cast<double>(result.n_neg);
    result.auc = (rank_sum_pos - n_pos * (n_pos + 1.0) / 2.0) / (n_pos * n_neg);
    return result;
}

TopKIntervals top_k_fractions(std::span<const double> scores,
                              const LabelSet& truth, std::size_t k_total,
                              std::size_t interval) {
    if (k_total == 0 || interval == 0 || k_total % interval != 0)
        throw_usage("top_k_fractions: interval must divide k_total");
    if (k_total > scores.size())
        throw_usage("top_k_fractions: k_total exceeds number of scored nodes");
    if (truth.size() < scores.size())
        throw_data("top_k_fractions: labels shorter than scores");

    std::vector<NodeId> order(scores.size());
    std::iota(order.begin(), order.end(), NodeId{0});
    std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return a < b;
    });

    TopKIntervals out;
    out.interval_size = interval;
    for (std::size_t start = 0; start < k_total; start += interval) {
        std::size_t sybils = 0;
        for (std::size_t k = start; k < start + interval; ++k)
            if (truth[order[k]] == Label::Sybil) ++sybils;
        out.fractions.push_back(static_cast<double>(sybils) /
                                static_cast<double>(interval));
    }
    return out;
}

const char* engine_name(EngineKind kind) {
    switch (kind) {
        case EngineKind::SybilScarC: return "sybilscar-c";
        case EngineKind::SybilScarD: return "sybilscar-d";
        case EngineKind::SybilRank: return "sybilrank";
        case EngineKind::Cia: return "cia";
        case EngineKind::SybilBelief: return "sybilbelief";
        case EngineKind::MultOracle: return "mult-oracle";
    }
    return "unknown";
}

EngineKind engine_from_name(const std::string& name) {
    if (name == "sybilscar-c") return EngineKind::SybilScarC;
    if (name == "sybilscar-d") return EngineKind::SybilScarD;
    if (name == "sybilrank") return EngineKind::SybilRank;
    if (name == "cia") return EngineKind::Cia;
    if (name == "sybilbelief") return EngineKind::SybilBelief;
    if (name == "mult-oracle") return EngineKind::MultOracle;
    throw_usage("unknown engine '" + name + "'");
}

double resolve_w_hat(const Graph& g, const EngineParams& params) {
    if (params.w_hat > 0.0) return params.w_hat;
    return suggest_constant_weight(g, !params.w_hat_from_max);
}

int resolve_rw_iters(const Graph& g, const EngineParams& params) {
    if (params.rw_iters > 0) return params.rw_iters;
    const std::uint64_t n = g.node_count();
    return n <= 1 ? 1 : 64 - std::countl_zero(n - 1);
}

namespace {

ScarConfig scar_config(const Graph& g, const EngineParams& p, bool constant) {
    ScarConfig cfg;
    cfg.weighting = constant ? EdgeWeighting::constant(resolve_w_hat(g, p))
                             : EdgeWeighting::degree_normalized();
    cfg.theta = p.theta;
    cfg.delta = p.exact_iterations ? 0.0 : p.delta;
    cfg.max_iters = p.max_iters;
    if (!p.exact_iterations && !(p.delta > 0.0))
        throw_usage("delta must be > 0");
    return cfg;
}

LbpConfig lbp_config(const EngineParams& p) {
    return {p.lbp_weight, p.theta, p.max_iters, p.message_epsilon};
}

}  // namespace

RankingResult run_engine(EngineKind kind, const Graph& g,
                         const TrainingSet& ts, const EngineParams& params,
                         int threads) {
    switch (kind) {
        case EngineKind::SybilScarC:
            return run_sybilscar(g, ts, scar_config(g, params, true), threads);
        case EngineKind::SybilScarD:
            return run_sybilscar(g, ts, scar_config(g, params, false), threads);
        case EngineKind::SybilRank:
            return run_rw(g, ts, RwConfig::sybilrank(resolve_rw_iters(g, params)),
                          threads);
        case EngineKind::Cia:
            return run_rw(
                g, ts, RwConfig::cia(params.cia_alpha, resolve_rw_iters(g, params)),
                threads);
        case EngineKind::SybilBelief:
            return run_sybilbelief(g, ts, lbp_config(params), threads);
        case EngineKind::MultOracle:
            return run_multiplicative_oracle(g, ts, params.theta,
                                             params.lbp_weight,
                                             params.max_iters);
    }
    throw_usage("unknown engine kind");
}

RankingResult run_engine_with_priors(EngineKind kind, const Graph& g,
                                     std::span<const double> prior_prob,
                                     const EngineParams& params, int threads) {
    std::vector<double> q_hat;
    switch (kind) {
        case EngineKind::SybilScarC:
        case EngineKind::SybilScarD: {
            q_hat.resize(prior_prob.size());
            for (std::size_t u = 0; u < q_hat.size(); ++u)
                q_hat[u] = prior_prob[u] - 0.5;
            return run_sybilscar(g, q_hat, scar_config(g, params, kind == EngineKind::SybilScarC),
                                 threads);
        }
        case EngineKind::SybilBelief:
            return run_sybilbelief(g, prior_prob, lbp_config(params), threads);
        case EngineKind::MultOracle:
            return run_multiplicative_oracle(g, prior_prob, params.lbp_weight,
                                             params.max_iters);
        default:
            throw_usage(
                "engine '" + std::string(engine_name(kind)) +
                "' seeds from labeled nodes and does not accept a prior file");
    }
}

SybilInstance make_instance(const InstanceSpec& spec, std::uint64_t seed) {
    switch (spec.kind) {
        case InstanceSpec::Kind::Replica:
            return replica_attack(spec.base,
                                  {spec.attack_edges, mix_seed(seed, 3)});
        case InstanceSpec::Kind::ErPair: {
            const Graph b =
                er_graph(spec.region_nodes, spec.er_avg_degree, mix_seed(seed, 1));
            const Graph s =
                er_graph(spec.region_nodes, spec.er_avg_degree, mix_seed(seed, 2));
            return join_regions(b, s, {spec.attack_edges, mix_seed(seed, 3)});
        }
        case InstanceSpec::Kind::PaPair: {
            const Graph b = pa_graph(spec.region_nodes, spec.pa_edges_per_node,
                                     mix_seed(seed, 1));
            const Graph s = pa_graph(spec.region_nodes, spec.pa_edges_per_node,
                                     mix_seed(seed, 2));
            return join_regions(b, s, {spec.attack_edges, mix_seed(seed, 3)});
        }
    }
    throw_usage("unknown instance kind");
}

const char* sweep_var_name(SweepVar var) {
    switch (var) {
        case SweepVar::AttackEdges: return "attack-edges";
        case SweepVar::NoiseTau: return "tau";
        case SweepVar::Theta: return "theta";
    }
    return "unknown";
}

SweepVar sweep_var_from_name(const std::string& name) {
    if (name == "attack-edges") return SweepVar::AttackEdges;
    if (name == "tau") return SweepVar::NoiseTau;
    if (name == "theta") return SweepVar::Theta;
    throw_usage("unknown sweep variable '" + name + "'");
}

std::vector<SweepRow> run_sweep(const ExperimentSpec& spec) {
    if (spec.values.empty()) throw_usage("sweep requires at least one value");
    if (spec.engines.empty()) throw_usage("sweep requires at least one engine");
    if (spec.repetitions < 1) throw_usage("sweep requires repetitions >= 1");

    std::vector<std::uint64_t> seeds = spec.seeds;
    if (seeds.empty())
        for (int r = 1; r <= spec.repetitions; ++r) seeds.push_back(r);
    if (seeds.size() < static_cast<std::size_t>(spec.repetitions))
        throw_usage("sweep: fewer seeds than repetitions");

    std::vector<SweepRow> rows;
    for (double value : spec.values) {
        std::vector<std::vector<double>> aucs(spec.engines.size());
        for (int rep = 0; rep < spec.repetitions; ++rep) {
            const std::uint64_t rep_seed = seeds[rep];

            InstanceSpec inst_spec = spec.instance;
            double tau = spec.noise_tau;
            EngineParams params = spec.params;
            switch (spec.var) {
                case SweepVar::AttackEdges:
                    inst_spec.attack_edges = static_cast<std::uint64_t>(value);
                    break;
                case SweepVar::NoiseTau: tau = value; break;
                case SweepVar::Theta: params.theta = value; break;
            }

            const SybilInstance inst =
                make_instance(inst_spec, mix_seed(rep_seed, 101));
            TrainingSet ts = sample_training(inst.truth, spec.train_count,
                                             mix_seed(rep_seed, 102));
            if (tau > 0.0) ts = inject_noise(ts, tau, mix_seed(rep_seed, 103));

            std::vector<bool> in_training(inst.graph.node_count(), false);
            for (NodeId u : ts.benign) in_training[u] = true;
            for (NodeId u : ts.sybil) in_training[u] = true;
            std::vector<NodeId> test_nodes;
            test_nodes.reserve(inst.graph.node_count());
            for (NodeId u = 0; u < inst.graph.node_count(); ++u)
                if (!in_training[u]) test_nodes.push_back(u);

            for (std::size_t e = 0; e < spec.engines.size(); ++e) {
                const auto result = run_engine(spec.engines[e], inst.graph, ts,
                                               params, spec.threads);
                aucs[e].push_back(
                    auc(result.scores, inst.truth, test_nodes).auc);
            }
        }
        for (std::size_t e = 0; e < spec.engines.size(); ++e) {
            const auto& xs = aucs[e];
            const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) /
                                static_cast<double>(xs.size());
            double var = 0.0;
            for (double x : xs) var += (x - mean) * (x - mean);
            var /= static_cast<double>(xs.size());
            rows.push_back({value, spec.engines[e], mean, std::sqrt(var)});
        }
    }
    return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream out;
    out << "value,engine,auc_mean,auc_std\n";
    for (const auto& r : rows)
        out << format_double(r.value) << ',' << engine_name(r.engine) << ','
            << format_double(r.auc_mean) << ',' << format_double(r.auc_std)
            << '\n';
    return out.str();
}

std::vector<TraceRow> run_convergence_trace(const Graph& g,
                                            const TrainingSet& ts,
                                            const std::vector<EngineKind>& engines,
                                            const EngineParams& params,
                                            int iters, int threads) {
    if (iters < 1) throw_usage("trace requires iters >= 1");
    EngineParams p = params;
    p.exact_iterations = true;
    p.max_iters = iters;
    p.rw_iters = iters;

    std::vector<TraceRow> rows;
    for (EngineKind kind : engines) {
        const auto result = run_engine(kind, g, ts, p, threads);
        for (std::size_t t = 0; t < result.relative_errors.size(); ++t)
            rows.push_back({static_cast<int>(t) + 1, kind,
                            result.relative_errors[t]});
    }
    return rows;
}

std::string trace_csv(const std::vector<TraceRow>& rows) {
    std::ostringstream out;
    out << "iteration,engine,relative_error\n";
    for (const auto& r : rows)
        out << r.iteration << ',' << engine_name(r.engine) << ','
            << format_double(r.relative_error) << '\n';
    return out.str();
}

std::vector<BenchRow> run_scaling_bench(std::span<const std::uint64_t> edge_counts,
                                        const std::vector<EngineKind>& engines,
                                        const EngineParams& params, int iters,
                                        double avg_degree, std::uint64_t seed,
                                        int repeats) {
    if (!(avg_degree > 0.0)) throw_usage("bench requires avg_degree > 0");
    if (repeats < 1) throw_usage("bench requires repeats >= 1");
    EngineParams p = params;
    p.exact_iterations = true;
    p.max_iters = iters;
    p.rw_iters = std::max(iters, 1);

    std::vector<BenchRow> rows;
    for (std::size_t i = 0; i < edge_counts.size(); ++i) {
        const std::uint64_t target_edges = edge_counts[i];
        const auto n = static_cast<std::uint32_t>(std::max(
            2.0, std::round(2.0 * static_cast<double>(target_edges) / avg_degree)));
        const Graph g = er_graph(n, avg_degree, mix_seed(seed, 10 + i));

        // A small synthetic training set; benchmark instances carry no ground
        // truth, only timing matters.
        LabelSet fake;
        fake.labels.assign(n, Label::Unlabeled);
        const std::size_t train = std::min<std::size_t>(100, n);
        for (std::size_t u = 0; u < train; ++u)
            fake.labels[u] = (u % 2 == 0) ? Label::Benign : Label::Sybil;
        const TrainingSet ts =
            sample_training(fake, n, mix_seed(seed, 20 + i));

        for (EngineKind kind : engines) {
            double best = std::numeric_limits<double>::infinity();
            for (int r = 0; r < repeats; ++r) {
                const auto start = std::chrono::steady_clock::now();
                const auto result = run_engine(kind, g, ts, p, /*threads=*/1);
                const auto stop = std::chrono::steady_clock::now();
                (void)result;
                best = std::min(
                    best,
                    std::chrono::duration<double>(stop - start).count());
            }
            rows.push_back({g.edge_count(), kind, best});
        }
    }
    return rows;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
    std::ostringstream out;
    out << "edges,engine,seconds\n";
    for (const auto& r : rows)
        out << r.edges << ',' << engine_name(r.engine) << ','
            << format_double(r.seconds) << '\n';
    return out.str();
}

}  // namespace sybil
