#pragma once

#include <cstdint>
#include <vector>

#include "sybil/engines.hpp"
#include "sybil/generate.hpp"
#include "sybil/graph.hpp"

namespace sybil {

struct SpectralEstimate {
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
};

// Maximum absolute row sum of the residual weight matrix. For the
// degree-normalized weighting every row sums to exactly 1/2 by construction.
double inf_norm_weight(const Graph& g, const EdgeWeighting& weighting);

// Power-iteration estimate of the spectral radius of the weight matrix.
// Starts from the all-ones vector; a positive diagonal shift keeps the
// dominant eigenvalue strictly dominant on bipartite-like spectra. The
// reported Rayleigh quotient is for the unshifted matrix.
SpectralEstimate spectral_radius(const Graph& g,
                                 const EdgeWeighting& weighting,
                                 double tol = 1e-6, int max_iters = 1000);

// Constant weight guaranteeing convergence: 1 / (2 * max_degree), or the
// practical 1 / (2 * avg_degree) when use_avg is set.
double suggest_constant_weight(const Graph& g, bool use_avg);

struct ConvergenceReport {
    double spectral_radius_estimate = 0.0;
    double inf_norm = 0.0;
    bool sufficient_ok = false;  // ||W||_inf < 1/2
    bool necessary_ok = false;   // rho(W) < 1/2
    int iterations_used = 0;
    bool power_converged = false;
};

ConvergenceReport convergence_report(const Graph& g,
                                     const EdgeWeighting& weighting,
                                     double tol = 1e-6, int max_iters = 1000);

// Asymptotic-order bound on falsely accepted Sybils:
// 2 * g * ceil(log2 |V|) / d(S). An order-of-magnitude quantity, not a
// certified count.
struct BoundReport {
    std::uint64_t attack_edges = 0;
    double avg_sybil_degree = 0.0;
    std::uint64_t node_count = 0;
    double bound = 0.0;
};

BoundReport security_bound(const SybilInstance& inst);

// L1 norms of the residual vector per iteration, for sub/supercritical
// weight experiments.
std::vector<double> residual_l1_trajectory(const Graph& g,
                                           std::span<const double> q_hat,
                                           const EdgeWeighting& weighting,
                                           int iters);

enum class RegionModel { Er, Pa };

struct MixingSimResult {
    std::vector<double> unlabeled_benign_residuals;
    std::vector<double> final_residuals;  // all nodes, benign block first
    double coeff_variation = 0.0;  // std / |mean| over the benign residuals
    bool all_negative = false;
    double c_benign = 0.0;  // g / Vol(B)
    double c_sybil = 0.0;   // g / Vol(S)
    int iterations = 0;
};

// Fast-mixing validation: builds a two-region instance (both regions from
// the given model), labels `n_seeds` benign nodes, and runs the simplified
// degree-normalized rule with priors injected only at initialization
// (p(t+1)_u = avg of neighbors' p(t)) for ceil(log2 |V|) iterations.
MixingSimResult benign_mixing_sim(RegionModel model, std::uint32_t n,
                                  double avg_degree, std::uint64_t g,
                                  std::uint32_t n_seeds, std::uint64_t seed);

}  // namespace sybil
