#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sybil/graph.hpp"
#include "sybil/labels.hpp"

namespace sybil {

// Residual homophily strength of an edge (v, u): either one constant w_hat
// for every edge, or the degree-normalized 1 / (2 * d_u) of the receiving
// node.
struct EdgeWeighting {
    enum class Kind { Constant, DegreeNormalized };
    Kind kind = Kind::DegreeNormalized;
    double constant_w_hat = 0.0;

    static EdgeWeighting constant(double w_hat) {
        return {Kind::Constant, w_hat};
    }
    static EdgeWeighting degree_normalized() {
        return {Kind::DegreeNormalized, 0.0};
    }
};

struct ScarConfig {
    EdgeWeighting weighting = EdgeWeighting::degree_normalized();
    double theta = 0.1;
    double delta = 1e-3;  // relative-error stop; 0 disables early stopping
    int max_iters = 20;
    // Keep residuals in [-0.5, 0.5] (valid probabilities) after every
    // iteration. Saturation is what stabilizes the rule when the weight is
    // above the spectral convergence condition; disable for linear-dynamics
    // experiments.
    bool clamp_residuals = true;
};

struct RwConfig {
    enum class SeedSide { Benign, Sybil };
    double restart_alpha = 0.0;
    SeedSide seed_side = SeedSide::Benign;
    int iters = 1;
    bool degree_normalize_final = false;

    // Trust propagation from labeled benign nodes; scores are negated
    // degree-normalized reputations so that higher means more Sybil-like.
    static RwConfig sybilrank(int iters) {
        return {0.0, SeedSide::Benign, iters, true};
    }
    // Badness propagation from labeled Sybils with restart.
    static RwConfig cia(double alpha, int iters) {
        return {alpha, SeedSide::Sybil, iters, false};
    }
};

struct LbpConfig {
    double edge_weight = 0.9;  // homophily strength, must be in (0.5, 1)
    double theta = 0.1;
    int max_iters = 20;
    double message_epsilon = 1e-10;  // lower clamp for normalized messages
};

// Per-node scores (higher = more Sybil-like) plus the per-iteration relative
// error trace ||p(t) - p(t-1)||_1 / ||p(t)||_1.
struct RankingResult {
    std::vector<double> scores;
    int iterations_run = 0;
    std::vector<double> relative_errors;
    bool converged = false;
};

// Probability that u is a Sybil given a single neighbor v:
// w_vu * p_v + (1 - w_vu) * (1 - p_v).
double neighbor_influence(double p_v, double w_vu);

// Residual form of the above: 2 * p_hat_v * w_hat_vu.
double residual_neighbor_influence(double p_hat_v, double w_hat_vu);

// One Jacobi step of the linearized rule:
// p_out[u] = q_hat[u] + 2 * sum_{v in N(u)} p_prev[v] * w_hat_vu.
// Reads only p_prev; output is bitwise independent of `threads`.
void scar_step(const Graph& g, std::span<const double> q_hat,
               std::span<const double> p_prev, const EdgeWeighting& weighting,
               std::span<double> p_out, int threads = 1);

RankingResult run_sybilscar(const Graph& g, std::span<const double> q_hat,
                            const ScarConfig& cfg, int threads = 1);
RankingResult run_sybilscar(const Graph& g, const TrainingSet& ts,
                            const ScarConfig& cfg, int threads = 1);

RankingResult run_rw(const Graph& g, const TrainingSet& ts,
                     const RwConfig& cfg, int threads = 1);

// Message state for loopy belief propagation: for each node u and each
// neighbor slot k of u, `to_plus` holds m_{v->u}(+1) where v = neighbors(u)[k]
// (pairs are normalized, so m(-1) = 1 - m(+1)).
struct LbpMessages {
    std::vector<double> to_plus;
};
LbpMessages lbp_init_messages(const Graph& g);

// One message update for the directed edge (v, u), computed directly from the
// definition (sum over x_v of potentials times the product of v's incoming
// messages except the one from u). Returns the normalized, clamped pair.
std::pair<double, double> lbp_message_update(const Graph& g,
                                             std::span<const double> prior_prob,
                                             const LbpMessages& prev, NodeId v,
                                             NodeId u, const LbpConfig& cfg);

RankingResult run_sybilbelief(const Graph& g,
                              std::span<const double> prior_prob,
                              const LbpConfig& cfg, int threads = 1);
RankingResult run_sybilbelief(const Graph& g, const TrainingSet& ts,
                              const LbpConfig& cfg, int threads = 1);

// The un-linearized multiplicative rule, iterated in log space. Validation
// oracle for the linearized engine; no convergence guarantee.
RankingResult run_multiplicative_oracle(const Graph& g,
                                        std::span<const double> prior_prob,
                                        double w, int iters);
RankingResult run_multiplicative_oracle(const Graph& g, const TrainingSet& ts,
                                        double theta, double w, int iters);

}  // namespace sybil
