#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sybil/engines.hpp"
#include "sybil/generate.hpp"
#include "sybil/graph.hpp"
#include "sybil/labels.hpp"

namespace sybil {

struct AucResult {
    double auc = 0.0;
    std::size_t n_pos = 0;
    std::size_t n_neg = 0;
};

// Probability that a random Sybil outranks a random benign node among
// `test_nodes`; tied pairs count 1/2 (Mann-Whitney). O(n log n) via sorting.
AucResult auc(std::span<const double> scores, const LabelSet& truth,
              std::span<const NodeId> test_nodes);

struct TopKIntervals {
    std::size_t interval_size = 0;
    std::vector<double> fractions;
};

// Fraction of Sybils per interval among the top k_total nodes ranked by
// score descending, ties broken by ascending node id.
TopKIntervals top_k_fractions(std::span<const double> scores,
                              const LabelSet& truth, std::size_t k_total,
                              std::size_t interval);

enum class EngineKind {
    SybilScarC,
    SybilScarD,
    SybilRank,
    Cia,
    SybilBelief,
    MultOracle,
};

const char* engine_name(EngineKind kind);
EngineKind engine_from_name(const std::string& name);

// Shared engine knobs; one struct so CLI flags, sweep cells, and benchmarks
// resolve identically.
struct EngineParams {
    double theta = 0.1;
    double delta = 1e-3;
    int max_iters = 20;        // budget for scar / lbp / oracle
    double w_hat = 0.0;        // <= 0: auto, 1 / (2 * avg_degree)
    bool w_hat_from_max = false;  // auto uses max degree instead
    double cia_alpha = 0.15;
    int rw_iters = 0;          // <= 0: ceil(log2 |V|)
    double lbp_weight = 0.9;
    double message_epsilon = 1e-10;
    bool exact_iterations = false;  // disable early stopping (traces, benches)
};

double resolve_w_hat(const Graph& g, const EngineParams& params);
int resolve_rw_iters(const Graph& g, const EngineParams& params);

RankingResult run_engine(EngineKind kind, const Graph& g,
                         const TrainingSet& ts, const EngineParams& params,
                         int threads = 1);
// Variant with an externally supplied prior-probability vector; only the
// prior-driven engines (sybilscar-c/d, sybilbelief, mult-oracle) accept it.
RankingResult run_engine_with_priors(EngineKind kind, const Graph& g,
                                     std::span<const double> prior_prob,
                                     const EngineParams& params,
                                     int threads = 1);

// How a benchmark instance is synthesized for sweeps.
struct InstanceSpec {
    enum class Kind { Replica, ErPair, PaPair };
    Kind kind = Kind::ErPair;
    Graph base;                 // Replica: the benign region
    std::uint32_t region_nodes = 1000;
    double er_avg_degree = 40.0;
    std::uint32_t pa_edges_per_node = 20;
    std::uint64_t attack_edges = 1000;
};

SybilInstance make_instance(const InstanceSpec& spec, std::uint64_t seed);

enum class SweepVar { AttackEdges, NoiseTau, Theta };

const char* sweep_var_name(SweepVar var);
SweepVar sweep_var_from_name(const std::string& name);

struct ExperimentSpec {
    InstanceSpec instance;
    std::size_t train_count = 200;
    double noise_tau = 0.0;
    std::vector<EngineKind> engines;
    EngineParams params;
    SweepVar var = SweepVar::AttackEdges;
    std::vector<double> values;
    int repetitions = 5;
    std::vector<std::uint64_t> seeds;  // empty: 1..repetitions
    int threads = 1;
};

struct SweepRow {
    double value = 0.0;
    EngineKind engine = EngineKind::SybilScarC;
    double auc_mean = 0.0;
    double auc_std = 0.0;  // population std over repetitions
};

// For each sweep value and repetition: synthesize an instance, sample (and
// optionally corrupt) a training set, run every engine, and score AUC on the
// non-training nodes. The instance and training draws depend only on the
// repetition seed, so sweep values are compared on paired inputs.
std::vector<SweepRow> run_sweep(const ExperimentSpec& spec);
std::string sweep_csv(const std::vector<SweepRow>& rows);

struct TraceRow {
    int iteration = 0;
    EngineKind engine = EngineKind::SybilScarC;
    double relative_error = 0.0;
};

// Runs each engine for exactly `iters` iterations on the given instance.
std::vector<TraceRow> run_convergence_trace(const Graph& g,
                                            const TrainingSet& ts,
                                            const std::vector<EngineKind>& engines,
                                            const EngineParams& params,
                                            int iters, int threads = 1);
std::string trace_csv(const std::vector<TraceRow>& rows);

struct BenchRow {
    std::uint64_t edges = 0;
    EngineKind engine = EngineKind::SybilScarC;
    double seconds = 0.0;
};

// Wall-clock seconds per engine on ER graphs scaled to the requested edge
// counts, fixed iteration budget, single-threaded. With repeats > 1 the
// minimum is reported.
std::vector<BenchRow> run_scaling_bench(std::span<const std::uint64_t> edge_counts,
                                        const std::vector<EngineKind>& engines,
                                        const EngineParams& params, int iters,
                                        double avg_degree, std::uint64_t seed,
                                        int repeats = 1);
std::string bench_csv(const std::vector<BenchRow>& rows);

}  // namespace sybil
