#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "sybilscar.h"

namespace {

// Minimal scratch-dir helper; the C API test binary links only the shared
// library, so it does not reuse the core test utilities.
struct TempDir {
    std::filesystem::path path;
    TempDir() {
        static int counter = 0;
        path = std::filesystem::temp_directory_path() /
               ("sybilscar_capi_" + std::to_string(counter++));
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    std::string file(const std::string& name) const {
        return (path / name).string();
    }
};

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

}  // namespace

TEST_SUITE_BEGIN("capi");

TEST_CASE("version and error surface") {
    CHECK(sybil_version() != nullptr);
    CHECK(std::strlen(sybil_version()) > 0);

    sybil_graph* g = nullptr;
    CHECK(sybil_graph_load("/no/such/file", &g) == SYBIL_DATA_ERROR);
    CHECK(std::strlen(sybil_last_error()) > 0);
    CHECK(sybil_graph_load(nullptr, &g) == SYBIL_USAGE_ERROR);
}

TEST_CASE("graph lifecycle through the C surface") {
    TempDir dir;
    write_file(dir.file("g.txt"), "0 1\n1 2\n2 0\n");

    sybil_graph* g = nullptr;
    REQUIRE(sybil_graph_load(dir.file("g.txt").c_str(), &g) == SYBIL_OK);
    CHECK(sybil_graph_node_count(g) == 3);
    CHECK(sybil_graph_edge_count(g) == 3);

    double avg = 0.0;
    uint32_t max_deg = 0;
    REQUIRE(sybil_graph_stats(g, &avg, &max_deg) == SYBIL_OK);
    CHECK(avg == doctest::Approx(2.0));
    CHECK(max_deg == 2);

    const uint32_t nodes[] = {0, 1};
    uint64_t vol = 0;
    REQUIRE(sybil_graph_volume(g, nodes, 2, &vol) == SYBIL_OK);
    CHECK(vol == 4);

    REQUIRE(sybil_graph_save(g, dir.file("copy.txt").c_str()) == SYBIL_OK);
    REQUIRE(sybil_graph_save_id_map(g, dir.file("map.txt").c_str()) == SYBIL_OK);

    sybil_graph* back = nullptr;
    REQUIRE(sybil_graph_load(dir.file("copy.txt").c_str(), &back) == SYBIL_OK);
    CHECK(sybil_graph_edge_count(back) == 3);

    sybil_graph_free(back);
    sybil_graph_free(g);
}

TEST_CASE("generators and instances") {
    sybil_graph* er = nullptr;
    REQUIRE(sybil_graph_er(500, 10.0, 7, &er) == SYBIL_OK);
    CHECK(sybil_graph_node_count(er) == 500);

    sybil_graph* pa = nullptr;
    REQUIRE(sybil_graph_pa(500, 5, 7, &pa) == SYBIL_OK);
    CHECK(sybil_graph_edge_count(pa) == 5 * (500 - 6) + 15);

    sybil_instance* inst = nullptr;
    REQUIRE(sybil_instance_replica(er, 100, 9, &inst) == SYBIL_OK);
    CHECK(sybil_instance_benign_count(inst) == 500);
    CHECK(sybil_instance_sybil_count(inst) == 500);
    CHECK(sybil_instance_attack_edge_count(inst) == 100);
    CHECK(sybil_graph_node_count(sybil_instance_graph(inst)) == 1000);

    TempDir dir;
    REQUIRE(sybil_instance_save(inst, dir.file("inst").c_str()) == SYBIL_OK);
    sybil_instance* loaded = nullptr;
    REQUIRE(sybil_instance_load(dir.file("inst").c_str(), &loaded) == SYBIL_OK);
    CHECK(sybil_instance_attack_edge_count(loaded) == 100);
    CHECK(sybil_graph_edge_count(sybil_instance_graph(loaded)) ==
          sybil_graph_edge_count(sybil_instance_graph(inst)));

    sybil_instance* joined = nullptr;
    REQUIRE(sybil_instance_join(er, pa, 50, 3, &joined) == SYBIL_OK);
    CHECK(sybil_instance_benign_count(joined) == 500);

    sybil_instance_free(joined);
    sybil_instance_free(loaded);
    sybil_instance_free(inst);
    sybil_graph_free(pa);
    sybil_graph_free(er);
}

TEST_CASE("training, engines, metrics") {
    sybil_graph* base = nullptr;
    REQUIRE(sybil_graph_er(400, 8.0, 21, &base) == SYBIL_OK);
    sybil_instance* inst = nullptr;
    REQUIRE(sybil_instance_replica(base, 60, 22, &inst) == SYBIL_OK);

    sybil_training* ts = nullptr;
    REQUIRE(sybil_training_sample(inst, 80, 23, &ts) == SYBIL_OK);
    CHECK(sybil_training_benign_count(ts) + sybil_training_sybil_count(ts) == 80);

    sybil_training* noisy = nullptr;
    REQUIRE(sybil_training_noise(ts, 0.2, 24, &noisy) == SYBIL_OK);
    const size_t n_b = sybil_training_benign_count(ts);
    const size_t n_s = sybil_training_sybil_count(ts);
    CHECK(sybil_training_benign_count(noisy) ==
          n_b - static_cast<size_t>(0.2 * n_b) + static_cast<size_t>(0.2 * n_s));
    CHECK(sybil_training_benign_count(noisy) +
              sybil_training_sybil_count(noisy) ==
          n_b + n_s);

    sybil_training* balanced = nullptr;
    REQUIRE(sybil_training_balance(ts, 25, &balanced) == SYBIL_OK);
    CHECK(sybil_training_benign_count(balanced) ==
          sybil_training_sybil_count(balanced));

    TempDir dir;
    REQUIRE(sybil_training_save(ts, dir.file("train.txt").c_str()) == SYBIL_OK);
    sybil_training* reloaded = nullptr;
    REQUIRE(sybil_training_load(dir.file("train.txt").c_str(), inst,
                                &reloaded) == SYBIL_OK);
    CHECK(sybil_training_benign_count(reloaded) ==
          sybil_training_benign_count(ts));

    sybil_engine_params params;
    sybil_engine_params_init(&params);
    CHECK(params.theta == 0.1);
    CHECK(params.delta == 1e-3);
    CHECK(params.max_iters == 20);
    params.max_iters = 40;  // this small ER instance saturates slowly

    sybil_result* result = nullptr;
    REQUIRE(sybil_run("sybilscar-c", sybil_instance_graph(inst), ts, &params,
                      1, &result) == SYBIL_OK);
    size_t count = 0;
    const double* scores = sybil_result_scores(result, &count);
    REQUIRE(scores != nullptr);
    CHECK(count == 800);
    CHECK(sybil_result_converged(result) == 1);
    CHECK(sybil_result_iterations(result) >= 1);

    double auc_value = 0.0;
    size_t n_pos = 0, n_neg = 0;
    REQUIRE(sybil_auc(inst, scores, count, ts, &auc_value, &n_pos, &n_neg) ==
            SYBIL_OK);
    CHECK(auc_value > 0.9);
    CHECK(n_pos + n_neg == 800 - 80);

    double fractions[4] = {0, 0, 0, 0};
    size_t n_intervals = 0;
    REQUIRE(sybil_top_k_fractions(inst, scores, count, 200, 50, fractions,
                                  &n_intervals) == SYBIL_OK);
    CHECK(n_intervals == 4);
    CHECK(fractions[0] >= 0.9);  // top interval is essentially all Sybil

    REQUIRE(sybil_result_save_scores(result, dir.file("scores.csv").c_str()) ==
            SYBIL_OK);
    REQUIRE(sybil_result_save_trace(result, dir.file("trace.csv").c_str()) ==
            SYBIL_OK);

    double* loaded_scores = nullptr;
    size_t loaded_count = 0;
    REQUIRE(sybil_scores_load(dir.file("scores.csv").c_str(), &loaded_scores,
                              &loaded_count) == SYBIL_OK);
    REQUIRE(loaded_count == count);
    for (size_t i = 0; i < count; ++i) CHECK(loaded_scores[i] == scores[i]);
    sybil_buffer_free(loaded_scores);

    write_file(dir.file("priors.txt"), "0 0.9\n3 0.2\n");
    double* priors = nullptr;
    size_t prior_count = 0;
    REQUIRE(sybil_priors_load(dir.file("priors.txt").c_str(), 800, &priors,
                              &prior_count) == SYBIL_OK);
    REQUIRE(prior_count == 800);
    CHECK(priors[0] == 0.9);
    CHECK(priors[3] == 0.2);
    CHECK(priors[5] == 0.5);
    sybil_result* from_priors = nullptr;
    REQUIRE(sybil_run_with_priors("sybilscar-c", sybil_instance_graph(inst),
                                  priors, prior_count, &params, 1,
                                  &from_priors) == SYBIL_OK);
    size_t n_scores = 0;
    CHECK(sybil_result_scores(from_priors, &n_scores)[0] > 0.5);
    sybil_result_free(from_priors);
    sybil_buffer_free(priors);

    CHECK(sybil_run("no-such-engine", sybil_instance_graph(inst), ts, &params,
                    1, &result) == SYBIL_USAGE_ERROR);

    const double flat_priors[3] = {0.5, 0.5, 0.5};
    sybil_result* prior_result = nullptr;
    CHECK(sybil_run_with_priors("sybilrank", sybil_instance_graph(inst),
                                flat_priors, 3, &params, 1,
                                &prior_result) == SYBIL_USAGE_ERROR);

    sybil_result_free(result);
    sybil_training_free(reloaded);
    sybil_training_free(balanced);
    sybil_training_free(noisy);
    sybil_training_free(ts);
    sybil_instance_free(inst);
    sybil_graph_free(base);
}

TEST_CASE("analysis surface") {
    sybil_graph* g = nullptr;
    REQUIRE(sybil_graph_er(300, 10.0, 31, &g) == SYBIL_OK);

    sybil_convergence_report report;
    REQUIRE(sybil_check_convergence(g, "degree", 0.0, &report) == SYBIL_OK);
    CHECK(report.inf_norm == 0.5);
    CHECK(report.sufficient_ok == 0);
    CHECK(report.spectral_radius <= 0.5 + 1e-9);

    double w = 0.0;
    REQUIRE(sybil_suggest_constant_weight(g, 1, &w) == SYBIL_OK);
    CHECK(w > 0.0);
    REQUIRE(sybil_check_convergence(g, "constant", w, &report) == SYBIL_OK);
    CHECK(sybil_check_convergence(g, "bogus", 0.0, &report) ==
          SYBIL_USAGE_ERROR);

    sybil_instance* inst = nullptr;
    REQUIRE(sybil_instance_replica(g, 0, 1, &inst) == SYBIL_OK);
    sybil_bound_report bound;
    REQUIRE(sybil_security_bound(inst, &bound) == SYBIL_OK);
    CHECK(bound.bound == 0.0);

    double cv = 0.0, neg_fraction = 0.0;
    uint32_t samples = 0;
    REQUIRE(sybil_mixing_sim("er", 300, 10.0, 100, 10, 5, &cv, &neg_fraction,
                             &samples) == SYBIL_OK);
    CHECK(samples == 290);
    CHECK(neg_fraction == doctest::Approx(1.0));
    CHECK(sybil_mixing_sim("bogus", 300, 10.0, 100, 10, 5, &cv, &neg_fraction,
                           &samples) == SYBIL_USAGE_ERROR);

    sybil_instance_free(inst);
    sybil_graph_free(g);
}

TEST_CASE("drivers write CSV files") {
    TempDir dir;

    sybil_sweep_spec spec;
    sybil_sweep_spec_init(&spec);
    spec.pair_model = "er";
    spec.region_nodes = 150;
    spec.er_avg_degree = 8.0;
    spec.train_count = 30;
    spec.sweep_var = "attack-edges";
    const double values[] = {30};
    spec.values = values;
    spec.value_count = 1;
    const char* engines[] = {"sybilscar-c", "sybilrank"};
    spec.engines = engines;
    spec.engine_count = 2;
    spec.repetitions = 2;
    REQUIRE(sybil_run_sweep(&spec, dir.file("sweep.csv").c_str()) == SYBIL_OK);

    std::ifstream sweep(dir.file("sweep.csv"));
    std::string header;
    std::getline(sweep, header);
    CHECK(header == "value,engine,auc_mean,auc_std");

    sybil_graph* base = nullptr;
    REQUIRE(sybil_graph_er(200, 8.0, 41, &base) == SYBIL_OK);
    sybil_instance* inst = nullptr;
    REQUIRE(sybil_instance_replica(base, 40, 42, &inst) == SYBIL_OK);
    sybil_training* ts = nullptr;
    REQUIRE(sybil_training_sample(inst, 40, 43, &ts) == SYBIL_OK);

    sybil_engine_params params;
    sybil_engine_params_init(&params);
    const char* trace_engines[] = {"sybilscar-c", "sybilbelief"};
    REQUIRE(sybil_run_trace(sybil_instance_graph(inst), ts, trace_engines, 2,
                            &params, 5, 1,
                            dir.file("trace.csv").c_str()) == SYBIL_OK);

    const uint64_t sizes[] = {1500, 3000};
    const char* bench_engines[] = {"sybilscar-c"};
    REQUIRE(sybil_run_bench(sizes, 2, bench_engines, 1, &params, 3, 10.0, 44,
                            1, dir.file("bench.csv").c_str()) == SYBIL_OK);

    std::ifstream bench(dir.file("bench.csv"));
    std::getline(bench, header);
    CHECK(header == "edges,engine,seconds");

    sybil_training_free(ts);
    sybil_instance_free(inst);
    sybil_graph_free(base);
}

TEST_SUITE_END();
