#include "sybil/engines.hpp"

#include <algorithm>
#include <cmath>

#include "sybil/errors.hpp"
#include "sybil/parallel.hpp"

namespace sybil {

namespace {

double l1_norm(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += std::abs(v);
    return s;
}

double l1_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
    return s;
}

// Relative error with the all-zero fixed point treated as converged.
double relative_error(std::span<const double> cur,
                      std::span<const double> prev, bool& zero_norm) {
    const double den = l1_norm(cur);
    if (den == 0.0) {
        zero_norm = true;
        return 0.0;
    }
    zero_norm = false;
    return l1_distance(cur, prev) / den;
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

constexpr double kLogFloor = 1e-300;

double safe_log(double x) { return std::log(std::max(x, kLogFloor)); }

std::vector<double> priors_from_training(const Graph& g,
                                         const TrainingSet& ts, double theta) {
    // Probability-space priors per the labeled/unlabeled assignment rule.
    std::vector<double> q(g.node_count(), 0.5);
    auto q_hat = assign_priors(ts, theta, g.node_count());
    for (std::size_t u = 0; u < q.size(); ++u) q[u] = 0.5 + q_hat[u];
    return q;
}

}  // namespace

double neighbor_influence(double p_v, double w_vu) {
    return w_vu * p_v + (1.0 - w_vu) * (1.0 - p_v);
}

double residual_neighbor_influence(double p_hat_v, double w_hat_vu) {
    return 2.0 * p_hat_v * w_hat_vu;
}

void scar_step(const Graph& g, std::span<const double> q_hat,
               std::span<const double> p_prev, const EdgeWeighting& weighting,
               std::span<double> p_out, int threads) {
    const std::size_t n = g.node_count();
    if (weighting.kind == EdgeWeighting::Kind::Constant) {
        const double two_w = 2.0 * weighting.constant_w_hat;
        parallel_for(n, threads, [&](std::size_t begin, std::size_t end) {
            for (std::size_t u = begin; u < end; ++u) {
                double acc = 0.0;
                for (NodeId v : g.neighbors(static_cast<NodeId>(u)))
                    acc += p_prev[v];
                p_out[u] = q_hat[u] + two_w * acc;
            }
        });
    } else {
        // 2 * w_hat_vu = 1 / d_u: a node adds the average of its neighbors'
        // residuals to its own prior. Isolated nodes keep their prior.
        parallel_for(n, threads, [&](std::size_t begin, std::size_t end) {
            for (std::size_t u = begin; u < end; ++u) {
                const auto row = g.neighbors(static_cast<NodeId>(u));
                if (row.empty()) {
                    p_out[u] = q_hat[u];
                    continue;
                }
                double acc = 0.0;
                for (NodeId v : row) acc += p_prev[v];
                p_out[u] = q_hat[u] + acc / static_cast<double>(row.size());
            }
        });
    }
}

RankingResult run_sybilscar(const Graph& g, std::span<const double> q_hat,
                            const ScarConfig& cfg, int threads) {
    if (q_hat.size() != g.node_count())
        throw_usage("prior vector size does not match node count");
    if (cfg.delta < 0.0) throw_usage("delta must be >= 0");
    if (cfg.max_iters < 0) throw_usage("max_iters must be >= 0");

    const std::size_t n = g.node_count();
    std::vector<double> prev(q_hat.begin(), q_hat.end());
    std::vector<double> cur(n, 0.0);

    RankingResult result;
    for (int t = 1; t <= cfg.max_iters; ++t) {
        scar_step(g, q_hat, prev, cfg.weighting, cur, threads);
        if (cfg.clamp_residuals) {
            parallel_for(n, threads, [&](std::size_t begin, std::size_t end) {
                for (std::size_t u = begin; u < end; ++u)
                    cur[u] = std::clamp(cur[u], -0.5, 0.5);
            });
        }
        bool zero_norm = false;
        const double rel = relative_error(cur, prev, zero_norm);
        result.relative_errors.push_back(rel);
        result.iterations_run = t;
        std::swap(prev, cur);
        if (zero_norm || rel < cfg.delta) {
            result.converged = true;
            break;
        }
    }
    result.scores.resize(n);
    for (std::size_t u = 0; u < n; ++u) result.scores[u] = prev[u] + 0.5;
    return result;
}

RankingResult run_sybilscar(const Graph& g, const TrainingSet& ts,
                            const ScarConfig& cfg, int threads) {
    const auto q_hat = assign_priors(ts, cfg.theta, g.node_count());
    return run_sybilscar(g, q_hat, cfg, threads);
}

RankingResult run_rw(const Graph& g, const TrainingSet& ts,
                     const RwConfig& cfg, int threads) {
    if (!(cfg.restart_alpha >= 0.0 && cfg.restart_alpha <= 1.0))
        throw_usage("restart probability must be in [0, 1]");
    if (cfg.iters < 0) throw_usage("iteration count must be >= 0");
    const auto& seeds = cfg.seed_side == RwConfig::SeedSide::Benign
                            ? ts.benign
                            : ts.sybil;
    if (seeds.empty()) throw_usage("random-walk engine requires a non-empty seed set");

    const std::size_t n = g.node_count();
    std::vector<double> q(n, 0.0);
    const double mass = 1.0 / static_cast<double>(seeds.size());
    for (NodeId u : seeds) {
        if (u >= n) throw_data("seed node id out of range");
        q[u] = mass;
    }

    std::vector<double> inv_deg(n, 0.0);
    for (std::size_t u = 0; u < n; ++u) {
        const auto d = g.degree(static_cast<NodeId>(u));
        inv_deg[u] = d > 0 ? 1.0 / static_cast<double>(d) : 0.0;
    }

    std::vector<double> prev = q;
    std::vector<double> cur(n, 0.0);
    const double alpha = cfg.restart_alpha;
    const double keep = 1.0 - alpha;

    RankingResult result;
    for (int t = 1; t <= cfg.iters; ++t) {
        parallel_for(n, threads, [&](std::size_t begin, std::size_t end) {
            for (std::size_t u = begin; u < end; ++u) {
                double acc = 0.0;
                for (NodeId v : g.neighbors(static_cast<NodeId>(u)))
                    acc += prev[v] * inv_deg[v];
                cur[u] = keep * acc + alpha * q[u];
            }
        });
        bool zero_norm = false;
        result.relative_errors.push_back(relative_error(cur, prev, zero_norm));
        result.iterations_run = t;
        std::swap(prev, cur);
    }

    result.scores.resize(n);
    if (cfg.degree_normalize_final) {
        // Trust from benign seeds; negate so higher = more Sybil-like. The
        // trailing +0.0 turns -0 into 0 for isolated nodes.
        for (std::size_t u = 0; u < n; ++u)
            result.scores[u] = -(prev[u] * inv_deg[u]) + 0.0;
    } else {
        result.scores.assign(prev.begin(), prev.end());
    }
    return result;
}

LbpMessages lbp_init_messages(const Graph& g) {
    LbpMessages m;
    // One slot per directed edge, aligned with the receiver's neighbor row.
    m.to_plus.assign(g.node_count() == 0
                         ? 0
                         : static_cast<std::size_t>(2) * g.edge_count(),
                     0.5);
    return m;
}

namespace {

void validate_lbp(const LbpConfig& cfg) {
    // 0.5 (uncorrelated edges) is the degenerate boundary and is allowed.
    if (!(cfg.edge_weight >= 0.5 && cfg.edge_weight < 1.0))
        throw_usage("LBP edge weight must be in [0.5, 1)");
    if (!(cfg.message_epsilon > 0.0 && cfg.message_epsilon < 0.5))
        throw_usage("message epsilon must be in (0, 0.5)");
    if (cfg.max_iters < 0) throw_usage("max_iters must be >= 0");
}

std::pair<double, double> normalize_clamped(double plus, double minus,
                                            double eps) {
    const double sum = plus + minus;
    double m = sum > 0.0 ? plus / sum : 0.5;
    m = std::clamp(m, eps, 1.0 - eps);
    return {m, 1.0 - m};
}

}  // namespace

std::pair<double, double> lbp_message_update(const Graph& g,
                                             std::span<const double> prior_prob,
                                             const LbpMessages& prev, NodeId v,
                                             NodeId u, const LbpConfig& cfg) {
    validate_lbp(cfg);
    if (!g.has_edge(v, u)) throw_usage("lbp_message_update: (v, u) is not an edge");

    // Product over v's incoming messages except the one from u, in log space.
    double log_prod_plus = 0.0, log_prod_minus = 0.0;
    std::uint64_t base = 0;
    for (NodeId w = 0; w < v; ++w) base += g.degree(w);
    const auto row = g.neighbors(v);
    for (std::size_t k = 0; k < row.size(); ++k) {
        if (row[k] == u) continue;
        const double mp = prev.to_plus[base + k];
        log_prod_plus += safe_log(mp);
        log_prod_minus += safe_log(1.0 - mp);
    }
    const double lmax = std::max(log_prod_plus, log_prod_minus);
    const double e_plus = std::exp(log_prod_plus - lmax);
    const double e_minus = std::exp(log_prod_minus - lmax);

    const double q = prior_prob[v];
    const double w_edge = cfg.edge_weight;
    const double plus = q * w_edge * e_plus + (1.0 - q) * (1.0 - w_edge) * e_minus;
    const double minus = q * (1.0 - w_edge) * e_plus + (1.0 - q) * w_edge * e_minus;
    return normalize_clamped(plus, minus, cfg.message_epsilon);
}

RankingResult run_sybilbelief(const Graph& g,
                              std::span<const double> prior_prob,
                              const LbpConfig& cfg, int threads) {
    validate_lbp(cfg);
    if (prior_prob.size() != g.node_count())
        throw_usage("prior vector size does not match node count");

    const std::size_t n = g.node_count();
    const std::size_t slots = static_cast<std::size_t>(2) * g.edge_count();

    // Reverse slot index: slot of edge (u -> v) for each slot of (v -> u).
    std::vector<std::uint64_t> offsets(n + 1, 0);
    for (std::size_t u = 0; u < n; ++u)
        offsets[u + 1] = offsets[u] + g.degree(static_cast<NodeId>(u));
    std::vector<std::uint64_t> reverse_slot(slots);
    parallel_for(n, threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t u = begin; u < end; ++u) {
            const auto row = g.neighbors(static_cast<NodeId>(u));
            for (std::size_t k = 0; k < row.size(); ++k) {
                const NodeId v = row[k];
                const auto vrow = g.neighbors(v);
                const auto it =
                    std::lower_bound(vrow.begin(), vrow.end(),
                                     static_cast<NodeId>(u));
                reverse_slot[offsets[u] + k] =
                    offsets[v] + static_cast<std::uint64_t>(it - vrow.begin());
            }
        }
    });

    std::vector<double> msg(slots, 0.5), next_msg(slots, 0.5);
    // Per-node log-sums of incoming messages, refreshed after every round.
    std::vector<double> sum_log_plus(n, 0.0), sum_log_minus(n, 0.0);
    auto refresh_sums = [&](const std::vector<double>& m) {
        parallel_for(n, threads, [&](std::size_t begin, std::size_t end) {
            for (std::size_t u = begin; u < end; ++u) {
                double sp = 0.0, sm = 0.0;
                for (std::uint64_t s = offsets[u]; s < offsets[u + 1]; ++s) {
                    sp += safe_log(m[s]);
                    sm += safe_log(1.0 - m[s]);
                }
                sum_log_plus[u] = sp;
                sum_log_minus[u] = sm;
            }
        });
    };
    refresh_sums(msg);

    std::vector<double> log_q(n), log_1mq(n);
    for (std::size_t u = 0; u < n; ++u) {
        log_q[u] = safe_log(prior_prob[u]);
        log_1mq[u] = safe_log(1.0 - prior_prob[u]);
    }

    auto posteriors = [&](std::vector<double>& out) {
        parallel_for(n, threads, [&](std::size_t begin, std::size_t end) {
            for (std::size_t u = begin; u < end; ++u)
                out[u] = sigmoid(log_q[u] + sum_log_plus[u] - log_1mq[u] -
                                 sum_log_minus[u]);
        });
    };

    std::vector<double> post_prev(prior_prob.begin(), prior_prob.end());
    std::vector<double> post_cur(n, 0.0);

    const double w_edge = cfg.edge_weight;
    const double eps = cfg.message_epsilon;

    RankingResult result;
    for (int t = 1; t <= cfg.max_iters; ++t) {
        // Synchronous flood: every directed message recomputed from the
        // previous round's state.
        parallel_for(n, threads, [&](std::size_t begin, std::size_t end) {
            for (std::size_t u = begin; u < end; ++u) {
                const auto row = g.neighbors(static_cast<NodeId>(u));
                for (std::size_t k = 0; k < row.size(); ++k) {
                    const NodeId v = row[k];
                    const std::uint64_t slot = offsets[u] + k;
                    // Exclude u's own message to v by subtracting its logs.
                    const double m_uv = msg[reverse_slot[slot]];
                    const double lp = sum_log_plus[v] - safe_log(m_uv);
                    const double lm = sum_log_minus[v] - safe_log(1.0 - m_uv);
                    const double lmax = std::max(lp, lm);
                    const double e_plus = std::exp(lp - lmax);
                    const double e_minus = std::exp(lm - lmax);
                    const double q = prior_prob[v];
                    const double plus =
                        q * w_edge * e_plus + (1.0 - q) * (1.0 - w_edge) * e_minus;
                    const double minus =
                        q * (1.0 - w_edge) * e_plus + (1.0 - q) * w_edge * e_minus;
                    next_msg[slot] = normalize_clamped(plus, minus, eps).first;
                }
            }
        });
        std::swap(msg, next_msg);
        refresh_sums(msg);
        posteriors(post_cur);

        bool zero_norm = false;
        result.relative_errors.push_back(
            relative_error(post_cur, post_prev, zero_norm));
        result.iterations_run = t;
        std::swap(post_prev, post_cur);
    }

    result.scores = std::move(post_prev);
    return result;
}

RankingResult run_sybilbelief(const Graph& g, const TrainingSet& ts,
                              const LbpConfig& cfg, int threads) {
    const auto q = priors_from_training(g, ts, cfg.theta);
    return run_sybilbelief(g, q, cfg, threads);
}

RankingResult run_multiplicative_oracle(const Graph& g,
                                        std::span<const double> prior_prob,
                                        double w, int iters) {
    if (!(w > 0.5 && w < 1.0))
        throw_usage("multiplicative oracle requires w in (0.5, 1)");
    if (iters < 0) throw_usage("iteration count must be >= 0");
    if (prior_prob.size() != g.node_count())
        throw_usage("prior vector size does not match node count");

    const std::size_t n = g.node_count();
    std::vector<double> prev(prior_prob.begin(), prior_prob.end());
    std::vector<double> cur(n, 0.0);

    RankingResult result;
    for (int t = 1; t <= iters; ++t) {
        for (std::size_t u = 0; u < n; ++u) {
            double log_plus = safe_log(prior_prob[u]);
            double log_minus = safe_log(1.0 - prior_prob[u]);
            for (NodeId v : g.neighbors(static_cast<NodeId>(u))) {
                const double f = neighbor_influence(prev[v], w);
                log_plus += safe_log(f);
                log_minus += safe_log(1.0 - f);
            }
            cur[u] = sigmoid(log_plus - log_minus);
        }
        bool zero_norm = false;
        result.relative_errors.push_back(relative_error(cur, prev, zero_norm));
        result.iterations_run = t;
        std::swap(prev, cur);
    }
    result.scores = std::move(prev);
    return result;
}

RankingResult run_multiplicative_oracle(const Graph& g, const TrainingSet& ts,
                                        double theta, double w, int iters) {
    const auto q = priors_from_training(g, ts, theta);
    return run_multiplicative_oracle(g, q, w, iters);
}

}  // namespace sybil
