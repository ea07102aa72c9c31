#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "sybil/engines.hpp"
#include "sybil/errors.hpp"
#include "sybil/generate.hpp"
#include "sybil/rng.hpp"
#include "testutil.hpp"

using namespace sybil;

namespace {

// Reference LBP in plain probability space, message maps keyed by directed
// edge. Usable only on tiny graphs; independent of the engine's batched
// log-space path.
struct BruteLbp {
    std::map<std::pair<NodeId, NodeId>, std::pair<double, double>> msgs;

    explicit BruteLbp(const Graph& g) {
        for (NodeId u = 0; u < g.node_count(); ++u)
            for (NodeId v : g.neighbors(u)) msgs[{v, u}] = {0.5, 0.5};
    }

    void round(const Graph& g, const std::vector<double>& q, double w,
               double eps) {
        auto next = msgs;
        for (auto& [edge, value] : next) {
            const auto [v, u] = edge;
            double prod_plus = 1.0, prod_minus = 1.0;
            for (NodeId z : g.neighbors(v)) {
                if (z == u) continue;
                prod_plus *= msgs.at({z, v}).first;
                prod_minus *= msgs.at({z, v}).second;
            }
            double plus = q[v] * w * prod_plus + (1.0 - q[v]) * (1.0 - w) * prod_minus;
            double minus = q[v] * (1.0 - w) * prod_plus + (1.0 - q[v]) * w * prod_minus;
            const double sum = plus + minus;
            plus = sum > 0 ? plus / sum : 0.5;
            plus = std::clamp(plus, eps, 1.0 - eps);
            value = {plus, 1.0 - plus};
        }
        msgs = std::move(next);
    }

    double posterior(const Graph& g, const std::vector<double>& q,
                     NodeId u) const {
        double prod_plus = 1.0, prod_minus = 1.0;
        for (NodeId v : g.neighbors(u)) {
            prod_plus *= msgs.at({v, u}).first;
            prod_minus *= msgs.at({v, u}).second;
        }
        const double num = q[u] * prod_plus;
        const double den = num + (1.0 - q[u]) * prod_minus;
        return num / den;
    }
};

int sign_of(double x, double deadband = 1e-9) {
    if (x > deadband) return 1;
    if (x < -deadband) return -1;
    return 0;
}

}  // namespace

TEST_SUITE_BEGIN("engines");

TEST_CASE("neighbor influence") {
    CHECK(neighbor_influence(0.5, 0.9) == doctest::Approx(0.5));
    CHECK(neighbor_influence(0.7, 0.5) == doctest::Approx(0.5));
    CHECK(neighbor_influence(0.6, 0.9) == doctest::Approx(0.58));
}

TEST_CASE("residual neighbor influence") {
    CHECK(residual_neighbor_influence(0.0, 0.3) == 0.0);
    CHECK(residual_neighbor_influence(0.1, 0.4) == doctest::Approx(0.08));

    // Identity with the probability form after the residual shift.
    Rng rng(13);
    for (int i = 0; i < 1000; ++i) {
        const double p_hat = rng.unit() - 0.5;
        const double w_hat = (rng.unit() - 0.5) * 0.999;
        const double via_prob =
            neighbor_influence(p_hat + 0.5, w_hat + 0.5) - 0.5;
        CHECK(residual_neighbor_influence(p_hat, w_hat) ==
              doctest::Approx(via_prob).epsilon(1e-12));
    }
}

TEST_CASE("scar_step") {
    const Graph path3 = testutil::path_graph(3);

    SUBCASE("zero previous state returns the priors") {
        const std::vector<double> q_hat{0.1, -0.2, 0.0};
        std::vector<double> zero(3, 0.0), out(3, 0.0);
        scar_step(path3, q_hat, zero, EdgeWeighting::constant(0.05), out);
        CHECK(out == q_hat);
    }

    SUBCASE("constant weighting, hand-computed update") {
        // Center node: q = 0.1, two neighbors at 0.05, w_hat = 0.01.
        const std::vector<double> q_hat{0.0, 0.1, 0.0};
        const std::vector<double> prev{0.05, 0.0, 0.05};
        std::vector<double> out(3, 0.0);
        scar_step(path3, q_hat, prev, EdgeWeighting::constant(0.01), out);
        CHECK(out[1] == doctest::Approx(0.102));
    }

    SUBCASE("degree-normalized weighting preserves a uniform state") {
        const Graph g = er_graph(100, 8.0, 3);
        const std::vector<double> q_hat(g.node_count(), 0.0);
        const std::vector<double> prev(g.node_count(), 0.37);
        std::vector<double> out(g.node_count(), 0.0);
        scar_step(g, q_hat, prev, EdgeWeighting::degree_normalized(), out);
        for (NodeId u = 0; u < g.node_count(); ++u)
            if (g.degree(u) > 0)
                CHECK(out[u] == doctest::Approx(0.37).epsilon(1e-12));
    }

    SUBCASE("isolated nodes keep their prior under degree normalization") {
        const Graph g = Graph::from_edges(3, {{0, 1}});
        const std::vector<double> q_hat{0.0, 0.0, 0.2};
        const std::vector<double> prev{0.1, 0.1, 0.3};
        std::vector<double> out(3, 0.0);
        scar_step(g, q_hat, prev, EdgeWeighting::degree_normalized(), out);
        CHECK(out[2] == 0.2);
    }
}

TEST_CASE("run_sybilscar fixed points") {
    SUBCASE("all-unlabeled training is the zero fixed point") {
        const Graph g = er_graph(50, 4.0, 2);
        const std::vector<double> q_hat(g.node_count(), 0.0);
        const auto r = run_sybilscar(
            g, q_hat, {EdgeWeighting::constant(0.05), 0.1, 1e-6, 20});
        CHECK(r.converged);
        CHECK(r.iterations_run == 1);
        for (double s : r.scores) CHECK(s == 0.5);
    }

    SUBCASE("two-node chain solves the 2x2 linear system") {
        // p0 = 0.1 + 0.2 p1, p1 = 0.2 p0  =>  p0 = 0.1 / 0.96.
        const Graph g = Graph::from_edges(2, {{0, 1}});
        TrainingSet ts;
        ts.sybil = {0};
        const auto r = run_sybilscar(
            g, ts, {EdgeWeighting::constant(0.1), 0.1, 1e-6, 100});
        CHECK(r.converged);
        CHECK(r.scores[0] - 0.5 == doctest::Approx(0.1 / 0.96).epsilon(1e-4));
        CHECK(r.scores[1] - 0.5 ==
              doctest::Approx(0.2 * 0.1 / 0.96).epsilon(1e-4));
    }

    SUBCASE("converged state satisfies the update equation in L1") {
        const Graph base = er_graph(200, 8.0, 6);
        const auto inst = replica_attack(base, {80, 7});
        const auto ts = sample_training(inst.truth, 40, 8);
        const double delta = 1e-4;
        // Strictly inside the sufficient condition ||W||_inf < 1/2.
        const double w_hat = 0.9 / (2.0 * inst.graph.max_degree());
        const ScarConfig cfg{EdgeWeighting::constant(w_hat), 0.1, delta, 500};
        const auto r = run_sybilscar(inst.graph, ts, cfg);
        REQUIRE(r.converged);

        std::vector<double> p_hat(r.scores.size());
        for (std::size_t u = 0; u < p_hat.size(); ++u)
            p_hat[u] = r.scores[u] - 0.5;
        const auto q_hat = assign_priors(ts, 0.1, inst.graph.node_count());
        std::vector<double> next(p_hat.size(), 0.0);
        scar_step(inst.graph, q_hat, p_hat, cfg.weighting, next);
        double resid = 0.0, norm = 0.0;
        for (std::size_t u = 0; u < p_hat.size(); ++u) {
            resid += std::abs(next[u] - p_hat[u]);
            norm += std::abs(p_hat[u]);
        }
        CHECK(resid <= delta * norm);
    }
}

TEST_CASE("sybilscar linearity and symmetry in the priors") {
    const Graph base = er_graph(150, 6.0, 11);
    const auto inst = replica_attack(base, {60, 12});
    const auto ts = sample_training(inst.truth, 30, 13);
    const double theta = 0.1;
    const auto q1 = assign_priors(ts, theta, inst.graph.node_count());
    std::vector<double> q2(q1.size()), qneg(q1.size());
    for (std::size_t u = 0; u < q1.size(); ++u) {
        q2[u] = 2.0 * q1[u];
        qneg[u] = -q1[u];
    }
    const EdgeWeighting w = EdgeWeighting::constant(0.02);

    // Step-level: doubling and negating the priors scales every residual
    // bitwise (multiplication by powers of two and negation are exact).
    std::vector<double> a = q1, b = q2, c = qneg;
    std::vector<double> na(q1.size()), nb(q1.size()), nc(q1.size());
    for (int t = 0; t < 8; ++t) {
        scar_step(inst.graph, q1, a, w, na);
        scar_step(inst.graph, q2, b, w, nb);
        scar_step(inst.graph, qneg, c, w, nc);
        std::swap(a, na);
        std::swap(b, nb);
        std::swap(c, nc);
    }
    for (std::size_t u = 0; u < a.size(); ++u) {
        CHECK(b[u] == 2.0 * a[u]);
        CHECK(c[u] == -a[u]);
    }

    // Run-level: identical iteration counts and relative-error traces, since
    // the stopping ratio is scale invariant.
    const ScarConfig cfg1{w, theta, 1e-3, 20};
    const auto r1 = run_sybilscar(inst.graph, q1, cfg1);
    const auto r2 = run_sybilscar(inst.graph, q2, cfg1);
    // Both runs stay strictly inside (-0.5, 0.5), so saturation never fires
    // and the dynamics are purely linear.
    for (double s : r2.scores) CHECK(std::abs(s - 0.5) < 0.5);
    CHECK(r1.iterations_run == r2.iterations_run);
    CHECK(r1.relative_errors == r2.relative_errors);
    for (std::size_t u = 0; u < r1.scores.size(); ++u)
        CHECK(r2.scores[u] - 0.5 ==
              doctest::Approx(2.0 * (r1.scores[u] - 0.5)).epsilon(1e-12));

    // Swapping the labeled sides negates every residual. The scores go
    // through a +0.5 shift, so the run-level check carries a float tolerance;
    // the step-level check above is the bitwise one.
    const auto rneg = run_sybilscar(inst.graph, qneg, cfg1);
    for (std::size_t u = 0; u < r1.scores.size(); ++u)
        CHECK(rneg.scores[u] - 0.5 ==
              doctest::Approx(-(r1.scores[u] - 0.5)).epsilon(1e-9));
}

TEST_CASE("sybilscar results are bitwise independent of the thread count") {
    const Graph base = er_graph(3000, 10.0, 14);
    const auto inst = replica_attack(base, {500, 15});
    const auto ts = sample_training(inst.truth, 100, 16);
    const ScarConfig cfg{EdgeWeighting::degree_normalized(), 0.1, 1e-3, 20};
    const auto r1 = run_sybilscar(inst.graph, ts, cfg, 1);
    const auto r4 = run_sybilscar(inst.graph, ts, cfg, 4);
    CHECK(r1.scores == r4.scores);
    CHECK(r1.relative_errors == r4.relative_errors);
}

TEST_CASE("random-walk engines") {
    SUBCASE("SybilRank on a complete graph mixes to uniform") {
        const std::uint32_t n = 16;
        const Graph k = testutil::complete_graph(n);
        TrainingSet ts;
        ts.benign = {0};
        const auto r = run_rw(k, ts, RwConfig::sybilrank(4));
        // Deviations from uniform shrink by 1/(n-1) per iteration:
        // (1/15)^4 of the seed mass remains after four rounds.
        const auto [mn, mx] =
            std::minmax_element(r.scores.begin(), r.scores.end());
        CHECK(*mx - *mn < 1e-3 * std::abs(*mn));
    }

    SUBCASE("CIA with alpha = 1 returns the prior forever") {
        const Graph g = er_graph(60, 5.0, 1);
        TrainingSet ts;
        ts.sybil = {3, 7};
        const auto r = run_rw(g, ts, RwConfig::cia(1.0, 10));
        for (NodeId u = 0; u < g.node_count(); ++u)
            CHECK(r.scores[u] == ((u == 3 || u == 7) ? 0.5 : 0.0));
    }

    SUBCASE("empty seed side is an error") {
        const Graph g = testutil::path_graph(4);
        TrainingSet ts;
        ts.sybil = {0};
        CHECK_THROWS_AS(run_rw(g, ts, RwConfig::sybilrank(3)), Error);
    }

    SUBCASE("SybilRank separates a clean instance") {
        const Graph base = er_graph(300, 8.0, 31);
        const auto inst = replica_attack(base, {30, 32});
        auto ts = sample_training(inst.truth, 60, 33);
        const auto r = run_rw(inst.graph, ts, RwConfig::sybilrank(10));
        // Sybil scores (negated trust) should exceed benign scores on average.
        double benign_sum = 0.0, sybil_sum = 0.0;
        for (NodeId u = 0; u < 300; ++u) benign_sum += r.scores[u];
        for (NodeId u = 300; u < 600; ++u) sybil_sum += r.scores[u];
        CHECK(sybil_sum / 300 > benign_sum / 300);
    }
}

TEST_CASE("lbp message update") {
    SUBCASE("uninformative fixed point at w = 0.5") {
        const Graph g = testutil::path_graph(3);
        const std::vector<double> q(3, 0.5);
        const auto msgs = lbp_init_messages(g);
        const LbpConfig cfg{0.5, 0.1, 20, 1e-10};
        const auto [plus, minus] = lbp_message_update(g, q, msgs, 0, 1, cfg);
        CHECK(plus == doctest::Approx(0.5));
        CHECK(minus == doctest::Approx(0.5));
    }

    SUBCASE("leaf message equals the direct potential sum") {
        const Graph g = Graph::from_edges(2, {{0, 1}});
        const std::vector<double> q{0.6, 0.5};
        const auto msgs = lbp_init_messages(g);
        const LbpConfig cfg{0.9, 0.1, 20, 1e-10};
        const auto [plus, minus] = lbp_message_update(g, q, msgs, 0, 1, cfg);
        CHECK(plus == doctest::Approx(0.58));
        CHECK(minus == doctest::Approx(0.42));
        CHECK(plus + minus == doctest::Approx(1.0));
    }

    SUBCASE("non-edges are rejected") {
        const Graph g = testutil::path_graph(3);
        const std::vector<double> q(3, 0.5);
        const auto msgs = lbp_init_messages(g);
        CHECK_THROWS_AS(
            lbp_message_update(g, q, msgs, 0, 2, LbpConfig{}), Error);
    }
}

TEST_CASE("run_sybilbelief matches the reference implementation") {
    const Graph g = er_graph(30, 4.0, 21);
    std::vector<double> q(g.node_count(), 0.5);
    q[0] = 0.6;
    q[1] = 0.6;
    q[5] = 0.4;
    const LbpConfig cfg{0.9, 0.1, 3, 1e-10};

    BruteLbp brute(g);
    for (int round = 0; round < cfg.max_iters; ++round)
        brute.round(g, q, cfg.edge_weight, cfg.message_epsilon);

    const auto r = run_sybilbelief(g, q, cfg);
    for (NodeId u = 0; u < g.node_count(); ++u)
        CHECK(r.scores[u] ==
              doctest::Approx(brute.posterior(g, q, u)).epsilon(1e-9));
}

TEST_CASE("run_sybilbelief behavior") {
    SUBCASE("edgeless graph returns the priors") {
        const Graph g = Graph::from_edges(4, {});
        const std::vector<double> q{0.6, 0.4, 0.5, 0.9};
        const auto r = run_sybilbelief(g, q, LbpConfig{});
        for (NodeId u = 0; u < 4; ++u)
            CHECK(r.scores[u] == doctest::Approx(q[u]).epsilon(1e-12));
    }

    SUBCASE("influence propagates along a 2-node chain") {
        const Graph g = Graph::from_edges(2, {{0, 1}});
        const std::vector<double> q{0.6, 0.5};
        const auto r = run_sybilbelief(g, q, LbpConfig{0.9, 0.1, 1, 1e-10});
        CHECK(r.scores[1] == doctest::Approx(0.58));
        CHECK(r.scores[1] > 0.5);
    }

    SUBCASE("messages stay normalized and clamped") {
        const Graph g = testutil::star_graph(6);
        std::vector<double> q(g.node_count(), 0.5);
        q[1] = 0.999;  // extreme prior pushes messages toward the clamp
        const LbpConfig cfg{0.9, 0.1, 4, 1e-6};
        auto msgs = lbp_init_messages(g);
        for (int round = 0; round < cfg.max_iters; ++round) {
            LbpMessages next = msgs;
            std::size_t slot = 0;
            for (NodeId u = 0; u < g.node_count(); ++u)
                for (NodeId v : g.neighbors(u)) {
                    const auto [plus, minus] =
                        lbp_message_update(g, q, msgs, v, u, cfg);
                    CHECK(plus + minus == doctest::Approx(1.0).epsilon(1e-12));
                    CHECK(plus >= cfg.message_epsilon);
                    CHECK(minus >= cfg.message_epsilon);
                    next.to_plus[slot++] = plus;
                }
            msgs = std::move(next);
        }
    }

    SUBCASE("bitwise thread independence") {
        const Graph base = er_graph(500, 8.0, 22);
        const auto inst = replica_attack(base, {100, 23});
        const auto ts = sample_training(inst.truth, 50, 24);
        const LbpConfig cfg{0.9, 0.1, 5, 1e-10};
        const auto r1 = run_sybilbelief(inst.graph, ts, cfg, 1);
        const auto r4 = run_sybilbelief(inst.graph, ts, cfg, 4);
        CHECK(r1.scores == r4.scores);
    }
}

TEST_CASE("multiplicative oracle") {
    SUBCASE("neutral priors stay neutral") {
        const Graph g = er_graph(40, 5.0, 25);
        const std::vector<double> q(g.node_count(), 0.5);
        const auto r = run_multiplicative_oracle(g, q, 0.7, 4);
        for (double s : r.scores) CHECK(s == doctest::Approx(0.5).epsilon(1e-9));
    }

    SUBCASE("an isolated node keeps its prior") {
        const Graph g = Graph::from_edges(1, {});
        const std::vector<double> q{0.6};
        const auto r = run_multiplicative_oracle(g, q, 0.7, 3);
        CHECK(r.scores[0] == doctest::Approx(0.6).epsilon(1e-12));
    }

    SUBCASE("agrees with the linearized engine in the small-residual regime") {
        int nodes_total = 0, sign_matches = 0;
        double min_spearman = 1.0;
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            const Graph g = er_graph(50, 8.0, seed);
            LabelSet truth;
            truth.labels.assign(50, Label::Benign);
            for (NodeId u = 25; u < 50; ++u) truth.labels[u] = Label::Sybil;
            const auto ts = sample_training(truth, 10, seed + 100);
            const double theta = 0.05, w = 0.51;
            const int iters = 3;

            const auto oracle =
                run_multiplicative_oracle(g, ts, theta, w, iters);
            const ScarConfig cfg{EdgeWeighting::constant(w - 0.5), theta, 0.0,
                                 iters};
            const auto scar = run_sybilscar(g, ts, cfg);
            REQUIRE(scar.iterations_run == iters);

            std::vector<double> a, b;
            for (NodeId u = 0; u < 50; ++u) {
                a.push_back(oracle.scores[u]);
                b.push_back(scar.scores[u]);
                ++nodes_total;
                if (sign_of(oracle.scores[u] - 0.5) ==
                    sign_of(scar.scores[u] - 0.5))
                    ++sign_matches;
            }
            min_spearman = std::min(min_spearman, testutil::spearman(a, b));
        }
        CHECK(static_cast<double>(sign_matches) / nodes_total >= 0.99);
        CHECK(min_spearman >= 0.95);
    }
}

TEST_SUITE_END();
