// Command-line front end. Links only the public C API (sybilscar.h); each
// command resolves its parameters, drives the library, and writes a manifest
// next to its outputs so runs can be reproduced byte for byte.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include "sybilscar.h"

namespace fs = std::filesystem;

namespace {

constexpr int kExitUsage = 2;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct Manifest {
    std::vector<std::pair<std::string, std::string>> entries;

    void add(const std::string& key, const std::string& value) {
        entries.emplace_back(key, value);
    }
    void add(const std::string& key, double value) { add(key, fmt(value)); }
    void add(const std::string& key, std::uint64_t value) {
        add(key, std::to_string(value));
    }
    void add(const std::string& key, int value) { add(key, std::to_string(value)); }

    void write(const fs::path& path) const {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + path.string());
        for (const auto& [k, v] : entries) out << k << '=' << v << '\n';
    }
};

[[noreturn]] void fail(sybil_status status) {
    std::cerr << "error: " << sybil_last_error() << "\n";
    std::exit(static_cast<int>(status));
}

void check(sybil_status status) {
    if (status != SYBIL_OK) fail(status);
}

// RAII wrappers over the opaque handles.
using GraphPtr = std::unique_ptr<sybil_graph, decltype(&sybil_graph_free)>;
using InstancePtr =
    std::unique_ptr<sybil_instance, decltype(&sybil_instance_free)>;
using TrainingPtr =
    std::unique_ptr<sybil_training, decltype(&sybil_training_free)>;
using ResultPtr = std::unique_ptr<sybil_result, decltype(&sybil_result_free)>;

GraphPtr load_graph(const std::string& path) {
    sybil_graph* g = nullptr;
    check(sybil_graph_load(path.c_str(), &g));
    return {g, &sybil_graph_free};
}

InstancePtr load_instance(const std::string& dir) {
    sybil_instance* inst = nullptr;
    check(sybil_instance_load(dir.c_str(), &inst));
    return {inst, &sybil_instance_free};
}

int resolve_threads(int threads) {
    if (threads > 0) return threads;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Shared engine flags, mirrored into sybil_engine_params.
struct EngineFlags {
    sybil_engine_params params;

    void attach(CLI::App* cmd) {
        sybil_engine_params_init(&params);
        cmd->add_option("--theta", params.theta,
                        "Residual prior magnitude for labeled nodes")
            ->capture_default_str();
        cmd->add_option("--delta", params.delta,
                        "Relative-error convergence threshold")
            ->capture_default_str();
        cmd->add_option("--max-iters", params.max_iters,
                        "Iteration budget for sybilscar/sybilbelief/mult-oracle")
            ->capture_default_str();
        cmd->add_option("--w-hat", params.w_hat,
                        "Constant residual edge weight for sybilscar-c "
                        "(0 = auto: 1/(2*avg_degree))")
            ->capture_default_str();
        cmd->add_flag("--w-hat-from-max", params.w_hat_from_max,
                      "Auto weight uses the maximum degree instead of the average");
        cmd->add_option("--alpha", params.cia_alpha,
                        "CIA restart probability")
            ->capture_default_str();
        cmd->add_option("--rw-iters", params.rw_iters,
                        "Random-walk iterations (0 = ceil(log2 |V|))")
            ->capture_default_str();
        cmd->add_option("--lbp-weight", params.lbp_weight,
                        "Edge weight for sybilbelief and mult-oracle")
            ->capture_default_str();
        cmd->add_option("--message-epsilon", params.message_epsilon,
                        "Lower clamp for normalized LBP messages")
            ->capture_default_str();
    }

    void describe(Manifest& m) const {
        m.add("theta", params.theta);
        m.add("delta", params.delta);
        m.add("max_iters", params.max_iters);
        m.add("w_hat", params.w_hat);
        m.add("w_hat_from_max", params.w_hat_from_max);
        m.add("cia_alpha", params.cia_alpha);
        m.add("rw_iters", params.rw_iters);
        m.add("lbp_weight", params.lbp_weight);
        m.add("message_epsilon", params.message_epsilon);
    }
};

std::vector<const char*> c_strings(const std::vector<std::string>& xs) {
    std::vector<const char*> out;
    out.reserve(xs.size());
    for (const auto& s : xs) out.push_back(s.c_str());
    return out;
}

// ---- generate -------------------------------------------------------------

struct GenerateArgs {
    std::string input, benign, sybil, out;
    std::uint32_t nodes = 1000;
    double avg_degree = 40.0;
    std::uint32_t m = 20;
    std::uint64_t attack_edges = 1000;
    std::uint64_t seed = 1;
    bool write_idmap = false;
};

void write_region_manifest(const GenerateArgs& args, const std::string& model,
                           const sybil_graph* g) {
    Manifest m;
    m.add("command", "generate-" + model);
    m.add("nodes", static_cast<std::uint64_t>(args.nodes));
    if (model == "er") m.add("avg_degree", args.avg_degree);
    if (model == "pa") m.add("edges_per_node", static_cast<std::uint64_t>(args.m));
    m.add("seed", args.seed);
    m.add("out", args.out);
    m.add("result_nodes", static_cast<std::uint64_t>(sybil_graph_node_count(g)));
    m.add("result_edges", sybil_graph_edge_count(g));
    m.add("version", sybil_version());
    m.write(args.out + ".manifest");
}

int run_generate_region(const GenerateArgs& args, const std::string& model) {
    sybil_graph* g = nullptr;
    if (model == "er")
        check(sybil_graph_er(args.nodes, args.avg_degree, args.seed, &g));
    else
        check(sybil_graph_pa(args.nodes, args.m, args.seed, &g));
    GraphPtr graph{g, &sybil_graph_free};
    check(sybil_graph_save(graph.get(), args.out.c_str()));
    write_region_manifest(args, model, graph.get());
    return 0;
}

int run_generate_instance(const GenerateArgs& args, bool replica) {
    GraphPtr benign = load_graph(replica ? args.input : args.benign);
    sybil_instance* raw = nullptr;
    GraphPtr sybil_region{nullptr, &sybil_graph_free};
    if (replica) {
        check(sybil_instance_replica(benign.get(), args.attack_edges, args.seed,
                                     &raw));
    } else {
        sybil_region = load_graph(args.sybil);
        check(sybil_instance_join(benign.get(), sybil_region.get(),
                                  args.attack_edges, args.seed, &raw));
    }
    InstancePtr inst{raw, &sybil_instance_free};
    check(sybil_instance_save(inst.get(), args.out.c_str()));
    if (args.write_idmap)
        check(sybil_graph_save_id_map(benign.get(),
                                      (fs::path(args.out) / "idmap.txt").string().c_str()));

    Manifest m;
    m.add("command", replica ? "generate-replica" : "generate-join");
    if (replica) m.add("input", args.input);
    else {
        m.add("benign", args.benign);
        m.add("sybil", args.sybil);
    }
    m.add("attack_edges", args.attack_edges);
    m.add("seed", args.seed);
    m.add("out", args.out);
    m.add("result_nodes", static_cast<std::uint64_t>(
                              sybil_graph_node_count(sybil_instance_graph(inst.get()))));
    m.add("result_edges",
          sybil_graph_edge_count(sybil_instance_graph(inst.get())));
    m.add("version", sybil_version());
    m.write(fs::path(args.out) / "manifest.txt");
    return 0;
}

// ---- run ------------------------------------------------------------------

struct RunArgs {
    std::string engine, instance, out, train_file, prior_file;
    std::size_t train_size = 200;
    std::uint64_t train_seed = 1;
    double noise_tau = 0.0;
    std::uint64_t noise_seed = 1;
    EngineFlags flags;
    int threads = 0;
};

TrainingPtr resolve_training(const RunArgs& args, const sybil_instance* inst,
                             Manifest& m) {
    sybil_training* raw = nullptr;
    if (!args.train_file.empty()) {
        check(sybil_training_load(args.train_file.c_str(), inst, &raw));
        m.add("train_file", args.train_file);
    } else {
        check(sybil_training_sample(inst, args.train_size, args.train_seed, &raw));
        m.add("train_size", static_cast<std::uint64_t>(args.train_size));
        m.add("train_seed", args.train_seed);
    }
    TrainingPtr ts{raw, &sybil_training_free};
    if (args.noise_tau > 0.0) {
        sybil_training* noisy = nullptr;
        check(sybil_training_noise(ts.get(), args.noise_tau, args.noise_seed,
                                   &noisy));
        ts.reset(noisy);
        m.add("noise_tau", args.noise_tau);
        m.add("noise_seed", args.noise_seed);
    }
    return ts;
}

int run_run(const RunArgs& args) {
    InstancePtr inst = load_instance(args.instance);
    const sybil_graph* g = sybil_instance_graph(inst.get());

    Manifest m;
    m.add("command", "run");
    m.add("engine", args.engine);
    m.add("instance", args.instance);
    TrainingPtr ts = resolve_training(args, inst.get(), m);

    const int threads = resolve_threads(args.threads);
    sybil_result* raw = nullptr;
    if (!args.prior_file.empty()) {
        double* priors = nullptr;
        size_t count = 0;
        check(sybil_priors_load(args.prior_file.c_str(),
                                sybil_graph_node_count(g), &priors, &count));
        const sybil_status status =
            sybil_run_with_priors(args.engine.c_str(), g, priors, count,
                                  &args.flags.params, threads, &raw);
        sybil_buffer_free(priors);
        check(status);
        m.add("prior_file", args.prior_file);
    } else {
        check(sybil_run(args.engine.c_str(), g, ts.get(), &args.flags.params,
                        threads, &raw));
    }
    ResultPtr result{raw, &sybil_result_free};

    fs::create_directories(args.out);
    check(sybil_result_save_scores(result.get(),
                                   (fs::path(args.out) / "scores.csv").string().c_str()));
    check(sybil_result_save_trace(result.get(),
                                  (fs::path(args.out) / "trace.csv").string().c_str()));
    check(sybil_training_save(ts.get(),
                              (fs::path(args.out) / "training.txt").string().c_str()));

    args.flags.describe(m);
    // Record the resolved auto values so the run can be replayed exactly.
    if (args.flags.params.w_hat <= 0.0 &&
        (args.engine == "sybilscar-c")) {
        double resolved = 0.0;
        check(sybil_suggest_constant_weight(g, args.flags.params.w_hat_from_max ? 0 : 1,
                                            &resolved));
        m.add("w_hat_resolved", resolved);
    }
    m.add("threads", threads);
    m.add("iterations_run", sybil_result_iterations(result.get()));
    m.add("converged", sybil_result_converged(result.get()) ? "true" : "false");
    m.add("version", sybil_version());
    m.write(fs::path(args.out) / "manifest.txt");
    return 0;
}

// ---- eval -----------------------------------------------------------------

struct EvalArgs {
    std::string scores, instance, train_file, out;
    std::size_t top_k = 0;
    std::size_t interval = 0;
};

int run_eval(const EvalArgs& args) {
    InstancePtr inst = load_instance(args.instance);
    double* scores = nullptr;
    size_t count = 0;
    check(sybil_scores_load(args.scores.c_str(), &scores, &count));
    std::unique_ptr<double[], void (*)(double*)> scores_guard(
        scores, [](double* p) { sybil_buffer_free(p); });

    TrainingPtr exclude{nullptr, &sybil_training_free};
    if (!args.train_file.empty()) {
        sybil_training* raw = nullptr;
        check(sybil_training_load(args.train_file.c_str(), inst.get(), &raw));
        exclude.reset(raw);
    }

    double auc = 0.0;
    size_t n_pos = 0, n_neg = 0;
    check(sybil_auc(inst.get(), scores, count, exclude.get(), &auc, &n_pos,
                    &n_neg));
    std::cout << "auc=" << fmt(auc) << "\n"
              << "test_sybils=" << n_pos << "\n"
              << "test_benign=" << n_neg << "\n";

    std::vector<std::pair<std::string, std::string>> csv_rows;
    csv_rows.emplace_back("auc", fmt(auc));
    if (args.top_k > 0) {
        if (args.interval == 0) {
            std::cerr << "error: --top-k requires --interval\n";
            return kExitUsage;
        }
        std::vector<double> fractions(args.top_k / std::max<std::size_t>(args.interval, 1) + 1);
        size_t n_intervals = 0;
        check(sybil_top_k_fractions(inst.get(), scores, count, args.top_k,
                                    args.interval, fractions.data(),
                                    &n_intervals));
        for (size_t i = 0; i < n_intervals; ++i) {
            std::cout << "top_k_fraction_" << (i + 1) << "=" << fmt(fractions[i])
                      << "\n";
            csv_rows.emplace_back("top_k_fraction_" + std::to_string(i + 1),
                                  fmt(fractions[i]));
        }
    }

    if (!args.out.empty()) {
        fs::create_directories(args.out);
        std::ofstream csv(fs::path(args.out) / "eval.csv", std::ios::binary);
        csv << "metric,value\n";
        for (const auto& [k, v] : csv_rows) csv << k << ',' << v << '\n';

        Manifest m;
        m.add("command", "eval");
        m.add("scores", args.scores);
        m.add("instance", args.instance);
        if (!args.train_file.empty()) m.add("train_file", args.train_file);
        if (args.top_k > 0) {
            m.add("top_k", static_cast<std::uint64_t>(args.top_k));
            m.add("interval", static_cast<std::uint64_t>(args.interval));
        }
        m.add("version", sybil_version());
        m.write(fs::path(args.out) / "manifest.txt");
    }
    return 0;
}

// ---- sweep ----------------------------------------------------------------

struct SweepArgs {
    std::string var = "attack-edges";
    std::vector<double> values;
    std::vector<std::string> engines;
    std::string input, model = "er", out;
    std::uint32_t region_nodes = 1000;
    double avg_degree = 40.0;
    std::uint32_t m = 20;
    std::uint64_t attack_edges = 1000;
    std::size_t train_size = 200;
    double tau = 0.0;
    int reps = 5;
    std::vector<std::uint64_t> seeds;
    EngineFlags flags;
    int threads = 0;
};

int run_sweep_cmd(const SweepArgs& args) {
    sybil_sweep_spec spec;
    sybil_sweep_spec_init(&spec);
    if (!args.input.empty()) spec.base_graph_path = args.input.c_str();
    else spec.pair_model = args.model.c_str();
    spec.region_nodes = args.region_nodes;
    spec.er_avg_degree = args.avg_degree;
    spec.pa_edges_per_node = args.m;
    spec.attack_edges = args.attack_edges;
    spec.train_count = args.train_size;
    spec.noise_tau = args.tau;
    spec.sweep_var = args.var.c_str();
    spec.values = args.values.data();
    spec.value_count = args.values.size();
    const auto engine_ptrs = c_strings(args.engines);
    spec.engines = engine_ptrs.data();
    spec.engine_count = engine_ptrs.size();
    spec.repetitions = args.reps;
    if (!args.seeds.empty()) {
        spec.seeds = args.seeds.data();
        spec.seed_count = args.seeds.size();
    }
    spec.params = args.flags.params;
    spec.threads = resolve_threads(args.threads);

    fs::create_directories(args.out);
    check(sybil_run_sweep(&spec, (fs::path(args.out) / "sweep.csv").string().c_str()));

    Manifest m;
    m.add("command", "sweep");
    m.add("var", args.var);
    std::string joined;
    for (double v : args.values) joined += (joined.empty() ? "" : ",") + fmt(v);
    m.add("values", joined);
    joined.clear();
    for (const auto& e : args.engines) joined += (joined.empty() ? "" : ",") + e;
    m.add("engines", joined);
    if (!args.input.empty()) m.add("input", args.input);
    else {
        m.add("model", args.model);
        m.add("region_nodes", static_cast<std::uint64_t>(args.region_nodes));
        if (args.model == "er") m.add("avg_degree", args.avg_degree);
        else m.add("edges_per_node", static_cast<std::uint64_t>(args.m));
    }
    m.add("attack_edges", args.attack_edges);
    m.add("train_size", static_cast<std::uint64_t>(args.train_size));
    m.add("tau", args.tau);
    m.add("repetitions", args.reps);
    joined.clear();
    for (auto s : args.seeds) joined += (joined.empty() ? "" : ",") + std::to_string(s);
    if (!joined.empty()) m.add("seeds", joined);
    args.flags.describe(m);
    m.add("threads", spec.threads);
    m.add("version", sybil_version());
    m.write(fs::path(args.out) / "manifest.txt");
    return 0;
}

// ---- trace ----------------------------------------------------------------

struct TraceArgs {
    std::string instance, out, train_file;
    std::vector<std::string> engines;
    int iters = 20;
    std::size_t train_size = 200;
    std::uint64_t train_seed = 1;
    EngineFlags flags;
    int threads = 0;
};

int run_trace_cmd(const TraceArgs& args) {
    InstancePtr inst = load_instance(args.instance);

    Manifest m;
    m.add("command", "trace");
    m.add("instance", args.instance);

    RunArgs training_args;
    training_args.train_file = args.train_file;
    training_args.train_size = args.train_size;
    training_args.train_seed = args.train_seed;
    TrainingPtr ts = resolve_training(training_args, inst.get(), m);

    const auto engine_ptrs = c_strings(args.engines);
    const int threads = resolve_threads(args.threads);
    fs::create_directories(args.out);
    check(sybil_run_trace(sybil_instance_graph(inst.get()), ts.get(),
                          engine_ptrs.data(), engine_ptrs.size(),
                          &args.flags.params, args.iters, threads,
                          (fs::path(args.out) / "trace.csv").string().c_str()));

    std::string joined;
    for (const auto& e : args.engines) joined += (joined.empty() ? "" : ",") + e;
    m.add("engines", joined);
    m.add("iters", args.iters);
    args.flags.describe(m);
    m.add("threads", threads);
    m.add("version", sybil_version());
    m.write(fs::path(args.out) / "manifest.txt");
    return 0;
}

// ---- bench ----------------------------------------------------------------

struct BenchArgs {
    std::vector<std::uint64_t> edges;
    std::vector<std::string> engines{"sybilscar-c", "sybilrank", "sybilbelief"};
    int iters = 20;
    double avg_degree = 40.0;
    std::uint64_t seed = 1;
    int repeats = 1;
    std::string out;
    EngineFlags flags;
};

int run_bench_cmd(const BenchArgs& args) {
    const auto engine_ptrs = c_strings(args.engines);
    fs::create_directories(args.out);
    check(sybil_run_bench(args.edges.data(), args.edges.size(),
                          engine_ptrs.data(), engine_ptrs.size(),
                          &args.flags.params, args.iters, args.avg_degree,
                          args.seed, args.repeats,
                          (fs::path(args.out) / "bench.csv").string().c_str()));

    Manifest m;
    m.add("command", "bench");
    std::string joined;
    for (auto e : args.edges) joined += (joined.empty() ? "" : ",") + std::to_string(e);
    m.add("edges", joined);
    joined.clear();
    for (const auto& e : args.engines) joined += (joined.empty() ? "" : ",") + e;
    m.add("engines", joined);
    m.add("iters", args.iters);
    m.add("avg_degree", args.avg_degree);
    m.add("seed", args.seed);
    m.add("repeats", args.repeats);
    m.add("threads", 1);  // timing runs are always single-threaded
    m.add("version", sybil_version());
    m.write(fs::path(args.out) / "manifest.txt");
    return 0;
}

// ---- check ----------------------------------------------------------------

struct CheckArgs {
    std::string graph, instance, weighting = "degree", out;
    double w_hat = 0.0;
};

int run_check_cmd(const CheckArgs& args) {
    if (args.graph.empty() && args.instance.empty()) {
        std::cerr << "error: check requires --graph or --instance\n";
        return kExitUsage;
    }
    GraphPtr owned{nullptr, &sybil_graph_free};
    InstancePtr inst{nullptr, &sybil_instance_free};
    const sybil_graph* g = nullptr;
    if (!args.instance.empty()) {
        inst = load_instance(args.instance);
        g = sybil_instance_graph(inst.get());
    } else {
        owned = load_graph(args.graph);
        g = owned.get();
    }

    sybil_convergence_report report;
    check(sybil_check_convergence(g, args.weighting.c_str(), args.w_hat,
                                  &report));

    std::vector<std::pair<std::string, std::string>> rows;
    rows.emplace_back("weighting", args.weighting);
    if (args.weighting == "constant") {
        double resolved = args.w_hat;
        if (resolved <= 0.0)
            check(sybil_suggest_constant_weight(g, 1, &resolved));
        rows.emplace_back("w_hat", fmt(resolved));
    }
    rows.emplace_back("inf_norm", fmt(report.inf_norm));
    rows.emplace_back("spectral_radius_estimate", fmt(report.spectral_radius));
    rows.emplace_back("sufficient_ok", report.sufficient_ok ? "true" : "false");
    rows.emplace_back("necessary_ok", report.necessary_ok ? "true" : "false");
    rows.emplace_back("power_iterations", std::to_string(report.iterations_used));

    if (inst) {
        sybil_bound_report bound;
        check(sybil_security_bound(inst.get(), &bound));
        rows.emplace_back("attack_edges", std::to_string(bound.attack_edges));
        rows.emplace_back("avg_sybil_degree", fmt(bound.avg_sybil_degree));
        rows.emplace_back("node_count", std::to_string(bound.node_count));
        rows.emplace_back("accepted_sybil_bound", fmt(bound.bound));
    }

    for (const auto& [k, v] : rows) std::cout << k << '=' << v << "\n";

    if (!args.out.empty()) {
        fs::create_directories(args.out);
        std::ofstream csv(fs::path(args.out) / "check.csv", std::ios::binary);
        csv << "key,value\n";
        for (const auto& [k, v] : rows) csv << k << ',' << v << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sybil detection via local-rule propagation"};
    // Given before the subcommand; keys live in a [command] section. Command
    // line flags win over config values, which win over built-in defaults.
    app.set_config("--config", "",
                   "Config file with key=value overrides per [command] section");
    app.require_subcommand(1);

    const char* threads_help =
        "Worker threads per iteration (0 = all cores; benchmarks default to "
        "1). Results are independent of this value.";

    // generate
    auto* generate = app.add_subcommand("generate", "Synthesize graphs and attack instances");
    generate->require_subcommand(1);
    GenerateArgs gen;

    auto* replica = generate->add_subcommand(
        "replica", "Benign region plus an isomorphic Sybil copy");
    replica->add_option("--input", gen.input, "Benign region edge list")->required();
    replica->add_option("--attack-edges", gen.attack_edges, "Number of random cross edges")
        ->capture_default_str();
    replica->add_option("--seed", gen.seed, "RNG seed")->capture_default_str();
    replica->add_option("--out", gen.out, "Output instance directory")->required();
    replica->add_flag("--write-idmap", gen.write_idmap,
                      "Also write the external-to-dense id map");

    auto* er = generate->add_subcommand("er", "Erdos-Renyi region");
    er->add_option("--nodes", gen.nodes, "Node count")->capture_default_str();
    er->add_option("--avg-degree", gen.avg_degree, "Target average degree")
        ->capture_default_str();
    er->add_option("--seed", gen.seed, "RNG seed")->capture_default_str();
    er->add_option("--out", gen.out, "Output edge-list file")->required();

    auto* pa = generate->add_subcommand("pa", "Preferential-attachment region");
    pa->add_option("--nodes", gen.nodes, "Node count")->capture_default_str();
    pa->add_option("--m", gen.m, "Edges attached per new node")->capture_default_str();
    pa->add_option("--seed", gen.seed, "RNG seed")->capture_default_str();
    pa->add_option("--out", gen.out, "Output edge-list file")->required();

    auto* join = generate->add_subcommand("join", "Join two regions with attack edges");
    join->add_option("--benign", gen.benign, "Benign region edge list")->required();
    join->add_option("--sybil", gen.sybil, "Sybil region edge list")->required();
    join->add_option("--attack-edges", gen.attack_edges, "Number of random cross edges")
        ->capture_default_str();
    join->add_option("--seed", gen.seed, "RNG seed")->capture_default_str();
    join->add_option("--out", gen.out, "Output instance directory")->required();

    // run
    auto* run = app.add_subcommand("run", "Run a detection engine on an instance");
    RunArgs run_args;
    run->add_option("--engine", run_args.engine,
                    "sybilscar-c | sybilscar-d | sybilrank | cia | sybilbelief | mult-oracle")
        ->required();
    run->add_option("--instance", run_args.instance, "Instance directory")->required();
    run->add_option("--out", run_args.out, "Output directory")->required();
    run->add_option("--train-size", run_args.train_size, "Training nodes to sample")
        ->capture_default_str();
    run->add_option("--seed,--train-seed", run_args.train_seed, "Training sample seed")
        ->capture_default_str();
    run->add_option("--train-file", run_args.train_file,
                    "Use an explicit training file instead of sampling");
    run->add_option("--noise-tau", run_args.noise_tau,
                    "Fraction of each training side to mislabel")
        ->capture_default_str();
    run->add_option("--noise-seed", run_args.noise_seed, "Noise seed")
        ->capture_default_str();
    run->add_option("--prior-file", run_args.prior_file,
                    "External prior probabilities (node_id p per line)");
    run->add_option("--threads", run_args.threads, threads_help)
        ->capture_default_str();
    run_args.flags.attach(run);

    // eval
    auto* eval = app.add_subcommand("eval", "Score a ranking against ground truth");
    EvalArgs eval_args;
    eval->add_option("--scores", eval_args.scores, "Scores CSV from run")->required();
    eval->add_option("--instance", eval_args.instance, "Instance directory")->required();
    eval->add_option("--train-file", eval_args.train_file,
                     "Training file whose nodes are excluded from the test set");
    eval->add_option("--top-k", eval_args.top_k, "Top-k size for interval fractions");
    eval->add_option("--interval", eval_args.interval, "Interval size (divides top-k)");
    eval->add_option("--out", eval_args.out, "Optional output directory for eval.csv");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "AUC sweeps over attack edges, noise, or theta");
    SweepArgs sweep_args;
    sweep->add_option("--var", sweep_args.var, "attack-edges | tau | theta")
        ->capture_default_str();
    sweep->add_option("--values", sweep_args.values, "Sweep values")
        ->required()
        ->delimiter(',');
    sweep->add_option("--engines", sweep_args.engines, "Engines to compare")
        ->required()
        ->delimiter(',');
    sweep->add_option("--input", sweep_args.input,
                      "Replica base edge list (omit to use --model)");
    sweep->add_option("--model", sweep_args.model, "er | pa region pair")
        ->capture_default_str();
    sweep->add_option("--region-nodes", sweep_args.region_nodes, "Nodes per region")
        ->capture_default_str();
    sweep->add_option("--avg-degree", sweep_args.avg_degree, "ER average degree")
        ->capture_default_str();
    sweep->add_option("--m", sweep_args.m, "PA edges per new node")->capture_default_str();
    sweep->add_option("--attack-edges", sweep_args.attack_edges,
                      "Attack edges when not the sweep variable")
        ->capture_default_str();
    sweep->add_option("--train-size", sweep_args.train_size, "Training nodes per cell")
        ->capture_default_str();
    sweep->add_option("--tau", sweep_args.tau, "Label noise when not the sweep variable")
        ->capture_default_str();
    sweep->add_option("--reps", sweep_args.reps, "Repetitions per value")
        ->capture_default_str();
    sweep->add_option("--seeds", sweep_args.seeds, "Per-repetition seeds (default 1..reps)")
        ->delimiter(',');
    sweep->add_option("--out", sweep_args.out, "Output directory")->required();
    sweep->add_option("--threads", sweep_args.threads, threads_help)
        ->capture_default_str();
    sweep_args.flags.attach(sweep);

    // trace
    auto* trace = app.add_subcommand("trace", "Per-iteration relative errors per engine");
    TraceArgs trace_args;
    trace->add_option("--instance", trace_args.instance, "Instance directory")->required();
    trace->add_option("--engines", trace_args.engines, "Engines to trace")
        ->required()
        ->delimiter(',');
    trace->add_option("--iters", trace_args.iters, "Exact iteration count")
        ->capture_default_str();
    trace->add_option("--train-size", trace_args.train_size, "Training nodes to sample")
        ->capture_default_str();
    trace->add_option("--seed,--train-seed", trace_args.train_seed, "Training sample seed")
        ->capture_default_str();
    trace->add_option("--train-file", trace_args.train_file, "Explicit training file");
    trace->add_option("--out", trace_args.out, "Output directory")->required();
    trace->add_option("--threads", trace_args.threads, threads_help)
        ->capture_default_str();
    trace_args.flags.attach(trace);

    // bench
    auto* bench = app.add_subcommand("bench", "Wall-clock scaling on ER graphs");
    BenchArgs bench_args;
    bench->add_option("--edges", bench_args.edges, "Edge counts to generate")
        ->required()
        ->delimiter(',');
    bench->add_option("--engines", bench_args.engines, "Engines to time")
        ->delimiter(',')
        ->capture_default_str();
    bench->add_option("--iters", bench_args.iters, "Iterations per engine")
        ->capture_default_str();
    bench->add_option("--avg-degree", bench_args.avg_degree, "ER average degree")
        ->capture_default_str();
    bench->add_option("--seed", bench_args.seed, "RNG seed")->capture_default_str();
    bench->add_option("--repeats", bench_args.repeats,
                      "Timing repeats (minimum is reported)")
        ->capture_default_str();
    bench->add_option("--out", bench_args.out, "Output directory")->required();
    bench_args.flags.attach(bench);

    // check
    auto* check_cmd = app.add_subcommand(
        "check", "Convergence conditions and the accepted-Sybil bound");
    CheckArgs check_args;
    check_cmd->add_option("--graph", check_args.graph, "Edge-list file");
    check_cmd->add_option("--instance", check_args.instance,
                          "Instance directory (also reports the bound)");
    check_cmd->add_option("--weighting", check_args.weighting, "constant | degree")
        ->capture_default_str();
    check_cmd->add_option("--w-hat", check_args.w_hat,
                          "Constant weight (0 = auto from avg degree)")
        ->capture_default_str();
    check_cmd->add_option("--out", check_args.out, "Optional directory for check.csv");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (replica->parsed()) return run_generate_instance(gen, true);
        if (join->parsed()) return run_generate_instance(gen, false);
        if (er->parsed()) return run_generate_region(gen, "er");
        if (pa->parsed()) return run_generate_region(gen, "pa");
        if (run->parsed()) return run_run(run_args);
        if (eval->parsed()) return run_eval(eval_args);
        if (sweep->parsed()) return run_sweep_cmd(sweep_args);
        if (trace->parsed()) return run_trace_cmd(trace_args);
        if (bench->parsed()) return run_bench_cmd(bench_args);
        if (check_cmd->parsed()) return run_check_cmd(check_args);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return kExitUsage;
}
