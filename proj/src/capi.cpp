#include "sybilscar.h"

#include <cmath>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "sybil/analysis.hpp"
#include "sybil/engines.hpp"
#include "sybil/errors.hpp"
#include "sybil/eval.hpp"
#include "sybil/generate.hpp"
#include "sybil/graph.hpp"
#include "sybil/io.hpp"
#include "sybil/labels.hpp"

#ifndef SYBIL_VERSION_STRING
#define SYBIL_VERSION_STRING "0.0.0"
#endif

struct sybil_graph {
    sybil::Graph g;
    std::vector<std::uint64_t> external_ids;
};

struct sybil_instance {
    sybil::SybilInstance inst;
    sybil_graph view;  // shares the instance graph's storage
};

struct sybil_training {
    sybil::TrainingSet ts;
};

struct sybil_result {
    sybil::RankingResult r;
};

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

sybil_status status_of(sybil::ErrorKind kind) {
    switch (kind) {
        case sybil::ErrorKind::Usage: return SYBIL_USAGE_ERROR;
        case sybil::ErrorKind::Numeric: return SYBIL_NUMERIC_ERROR;
        default: return SYBIL_DATA_ERROR;
    }
}

template <typename Fn>
sybil_status guarded(Fn&& fn) noexcept {
    try {
        fn();
        return SYBIL_OK;
    } catch (const sybil::Error& e) {
        set_error(e.what());
        return status_of(e.kind());
    } catch (const std::exception& e) {
        set_error(e.what());
        return SYBIL_DATA_ERROR;
    } catch (...) {
        set_error("unknown error");
        return SYBIL_DATA_ERROR;
    }
}

sybil_status usage_error(const char* msg) {
    set_error(msg);
    return SYBIL_USAGE_ERROR;
}

sybil::EngineParams to_params(const sybil_engine_params* p) {
    sybil::EngineParams out;
    if (!p) return out;
    out.theta = p->theta;
    out.delta = p->delta;
    out.max_iters = p->max_iters;
    out.w_hat = p->w_hat;
    out.w_hat_from_max = p->w_hat_from_max != 0;
    out.cia_alpha = p->cia_alpha;
    out.rw_iters = p->rw_iters;
    out.lbp_weight = p->lbp_weight;
    out.message_epsilon = p->message_epsilon;
    out.exact_iterations = p->exact_iterations != 0;
    return out;
}

std::vector<sybil::EngineKind> to_engines(const char* const* names,
                                          size_t count) {
    if (!names || count == 0) sybil::throw_usage("no engines given");
    std::vector<sybil::EngineKind> out;
    out.reserve(count);
    for (size_t i = 0; i < count; ++i)
        out.push_back(sybil::engine_from_name(names[i]));
    return out;
}

sybil_instance* wrap_instance(sybil::SybilInstance inst) {
    auto* out = new sybil_instance{std::move(inst), {}};
    out->view.g = out->inst.graph;
    return out;
}

void check_finite(const sybil::RankingResult& r) {
    for (double s : r.scores)
        if (!std::isfinite(s))
            sybil::throw_numeric("non-finite score produced");
}

void write_text(const char* path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) sybil::throw_data(std::string("cannot write file: ") + path);
    out << content;
    out.flush();
    if (!out) sybil::throw_data(std::string("write failed: ") + path);
}

sybil::EdgeWeighting parse_weighting(const sybil_graph* g,
                                     const char* weighting, double w_hat) {
    const std::string w = weighting ? weighting : "";
    if (w == "degree") return sybil::EdgeWeighting::degree_normalized();
    if (w == "constant") {
        const double resolved =
            w_hat > 0.0 ? w_hat : sybil::suggest_constant_weight(g->g, true);
        return sybil::EdgeWeighting::constant(resolved);
    }
    sybil::throw_usage("weighting must be 'constant' or 'degree'");
}

}  // namespace

extern "C" {

const char* sybil_version(void) { return SYBIL_VERSION_STRING; }

const char* sybil_last_error(void) { return g_last_error.c_str(); }

/* ---- graphs ------------------------------------------------------------ */

sybil_status sybil_graph_load(const char* path, sybil_graph** out) {
    if (!path || !out) return usage_error("sybil_graph_load: null argument");
    return guarded([&] {
        auto loaded = sybil::load_edge_list(path);
        *out = new sybil_graph{std::move(loaded.graph),
                               std::move(loaded.external_ids)};
    });
}

sybil_status sybil_graph_save(const sybil_graph* g, const char* path) {
    if (!g || !path) return usage_error("sybil_graph_save: null argument");
    return guarded([&] { sybil::save_edge_list(g->g, path); });
}

sybil_status sybil_graph_save_id_map(const sybil_graph* g, const char* path) {
    if (!g || !path) return usage_error("sybil_graph_save_id_map: null argument");
    return guarded([&] {
        sybil::LoadedGraph lg;
        lg.graph = g->g;
        lg.external_ids = g->external_ids;
        if (lg.external_ids.empty()) {
            // Generated graphs are already dense; the map is the identity.
            lg.external_ids.resize(g->g.node_count());
            for (std::uint32_t u = 0; u < g->g.node_count(); ++u)
                lg.external_ids[u] = u;
        }
        sybil::save_id_map(lg, path);
    });
}

void sybil_graph_free(sybil_graph* g) { delete g; }

uint32_t sybil_graph_node_count(const sybil_graph* g) {
    return g ? g->g.node_count() : 0;
}

uint64_t sybil_graph_edge_count(const sybil_graph* g) {
    return g ? g->g.edge_count() : 0;
}

sybil_status sybil_graph_stats(const sybil_graph* g, double* avg_degree,
                               uint32_t* max_degree) {
    if (!g) return usage_error("sybil_graph_stats: null graph");
    const auto s = sybil::stats(g->g);
    if (avg_degree) *avg_degree = s.avg_degree;
    if (max_degree) *max_degree = s.max_degree;
    return SYBIL_OK;
}

sybil_status sybil_graph_volume(const sybil_graph* g, const uint32_t* nodes,
                                size_t count, uint64_t* out) {
    if (!g || !out || (count > 0 && !nodes))
        return usage_error("sybil_graph_volume: null argument");
    return guarded([&] {
        *out = sybil::volume(g->g, std::span<const sybil::NodeId>(nodes, count));
    });
}

sybil_status sybil_graph_er(uint32_t nodes, double avg_degree, uint64_t seed,
                            sybil_graph** out) {
    if (!out) return usage_error("sybil_graph_er: null output");
    return guarded([&] {
        *out = new sybil_graph{sybil::er_graph(nodes, avg_degree, seed), {}};
    });
}

sybil_status sybil_graph_pa(uint32_t nodes, uint32_t edges_per_node,
                            uint64_t seed, sybil_graph** out) {
    if (!out) return usage_error("sybil_graph_pa: null output");
    return guarded([&] {
        *out = new sybil_graph{sybil::pa_graph(nodes, edges_per_node, seed), {}};
    });
}

/* ---- attack instances --------------------------------------------------- */

sybil_status sybil_instance_replica(const sybil_graph* benign,
                                    uint64_t attack_edges, uint64_t seed,
                                    sybil_instance** out) {
    if (!benign || !out) return usage_error("sybil_instance_replica: null argument");
    return guarded([&] {
        *out = wrap_instance(
            sybil::replica_attack(benign->g, {attack_edges, seed}));
    });
}

sybil_status sybil_instance_join(const sybil_graph* benign,
                                 const sybil_graph* sybil_region,
                                 uint64_t attack_edges, uint64_t seed,
                                 sybil_instance** out) {
    if (!benign || !sybil_region || !out)
        return usage_error("sybil_instance_join: null argument");
    return guarded([&] {
        *out = wrap_instance(sybil::join_regions(benign->g, sybil_region->g,
                                                 {attack_edges, seed}));
    });
}

sybil_status sybil_instance_save(const sybil_instance* inst, const char* dir) {
    if (!inst || !dir) return usage_error("sybil_instance_save: null argument");
    return guarded([&] { sybil::save_instance(inst->inst, dir); });
}

sybil_status sybil_instance_load(const char* dir, sybil_instance** out) {
    if (!dir || !out) return usage_error("sybil_instance_load: null argument");
    return guarded([&] { *out = wrap_instance(sybil::load_instance(dir)); });
}

void sybil_instance_free(sybil_instance* inst) { delete inst; }

const sybil_graph* sybil_instance_graph(const sybil_instance* inst) {
    return inst ? &inst->view : nullptr;
}

uint32_t sybil_instance_benign_count(const sybil_instance* inst) {
    return inst ? static_cast<uint32_t>(inst->inst.truth.count(sybil::Label::Benign))
                : 0;
}

uint32_t sybil_instance_sybil_count(const sybil_instance* inst) {
    return inst ? static_cast<uint32_t>(inst->inst.truth.count(sybil::Label::Sybil))
                : 0;
}

uint64_t sybil_instance_attack_edge_count(const sybil_instance* inst) {
    return inst ? inst->inst.attack_edges.size() : 0;
}

/* ---- training sets ------------------------------------------------------ */

sybil_status sybil_training_sample(const sybil_instance* inst, size_t count,
                                   uint64_t seed, sybil_training** out) {
    if (!inst || !out) return usage_error("sybil_training_sample: null argument");
    return guarded([&] {
        *out = new sybil_training{
            sybil::sample_training(inst->inst.truth, count, seed)};
    });
}

sybil_status sybil_training_load(const char* path, const sybil_instance* inst,
                                 sybil_training** out) {
    if (!path || !inst || !out)
        return usage_error("sybil_training_load: null argument");
    return guarded([&] {
        *out = new sybil_training{
            sybil::load_training(path, inst->inst.graph.node_count())};
    });
}

sybil_status sybil_training_save(const sybil_training* ts, const char* path) {
    if (!ts || !path) return usage_error("sybil_training_save: null argument");
    return guarded([&] { sybil::save_training(ts->ts, path); });
}

sybil_status sybil_training_noise(const sybil_training* ts, double tau,
                                  uint64_t seed, sybil_training** out) {
    if (!ts || !out) return usage_error("sybil_training_noise: null argument");
    return guarded([&] {
        *out = new sybil_training{sybil::inject_noise(ts->ts, tau, seed)};
    });
}

sybil_status sybil_training_balance(const sybil_training* ts, uint64_t seed,
                                    sybil_training** out) {
    if (!ts || !out) return usage_error("sybil_training_balance: null argument");
    return guarded([&] {
        *out = new sybil_training{sybil::balance_training(ts->ts, seed)};
    });
}

size_t sybil_training_benign_count(const sybil_training* ts) {
    return ts ? ts->ts.benign.size() : 0;
}

size_t sybil_training_sybil_count(const sybil_training* ts) {
    return ts ? ts->ts.sybil.size() : 0;
}

void sybil_training_free(sybil_training* ts) { delete ts; }

/* ---- engines ------------------------------------------------------------ */

void sybil_engine_params_init(sybil_engine_params* params) {
    if (!params) return;
    params->theta = 0.1;
    params->delta = 1e-3;
    params->max_iters = 20;
    params->w_hat = 0.0;
    params->w_hat_from_max = 0;
    params->cia_alpha = 0.15;
    params->rw_iters = 0;
    params->lbp_weight = 0.9;
    params->message_epsilon = 1e-10;
    params->exact_iterations = 0;
}

sybil_status sybil_run(const char* engine, const sybil_graph* g,
                       const sybil_training* ts,
                       const sybil_engine_params* params, int threads,
                       sybil_result** out) {
    if (!engine || !g || !ts || !out)
        return usage_error("sybil_run: null argument");
    return guarded([&] {
        auto result =
            sybil::run_engine(sybil::engine_from_name(engine), g->g, ts->ts,
                              to_params(params), threads);
        check_finite(result);
        *out = new sybil_result{std::move(result)};
    });
}

sybil_status sybil_run_with_priors(const char* engine, const sybil_graph* g,
                                   const double* priors, size_t count,
                                   const sybil_engine_params* params,
                                   int threads, sybil_result** out) {
    if (!engine || !g || !priors || !out)
        return usage_error("sybil_run_with_priors: null argument");
    return guarded([&] {
        auto result = sybil::run_engine_with_priors(
            sybil::engine_from_name(engine), g->g,
            std::span<const double>(priors, count), to_params(params), threads);
        check_finite(result);
        *out = new sybil_result{std::move(result)};
    });
}

const double* sybil_result_scores(const sybil_result* r, size_t* count) {
    if (!r) {
        if (count) *count = 0;
        return nullptr;
    }
    if (count) *count = r->r.scores.size();
    return r->r.scores.data();
}

const double* sybil_result_relative_errors(const sybil_result* r,
                                           size_t* count) {
    if (!r) {
        if (count) *count = 0;
        return nullptr;
    }
    if (count) *count = r->r.relative_errors.size();
    return r->r.relative_errors.data();
}

int sybil_result_iterations(const sybil_result* r) {
    return r ? r->r.iterations_run : 0;
}

int sybil_result_converged(const sybil_result* r) {
    return r && r->r.converged ? 1 : 0;
}

sybil_status sybil_result_save_scores(const sybil_result* r, const char* path) {
    if (!r || !path) return usage_error("sybil_result_save_scores: null argument");
    return guarded([&] { sybil::save_scores(r->r.scores, path); });
}

sybil_status sybil_result_save_trace(const sybil_result* r, const char* path) {
    if (!r || !path) return usage_error("sybil_result_save_trace: null argument");
    return guarded([&] { sybil::save_trace(r->r.relative_errors, path); });
}

void sybil_result_free(sybil_result* r) { delete r; }

/* ---- metrics ------------------------------------------------------------ */

sybil_status sybil_scores_load(const char* path, double** out, size_t* count) {
    if (!path || !out || !count)
        return usage_error("sybil_scores_load: null argument");
    return guarded([&] {
        auto scores = sybil::load_scores(path);
        *count = scores.size();
        *out = new double[scores.size()];
        std::memcpy(*out, scores.data(), scores.size() * sizeof(double));
    });
}

sybil_status sybil_priors_load(const char* path, uint32_t node_count,
                               double** out, size_t* count) {
    if (!path || !out || !count)
        return usage_error("sybil_priors_load: null argument");
    return guarded([&] {
        auto priors = sybil::load_priors(path, node_count);
        *count = priors.size();
        *out = new double[priors.size()];
        std::memcpy(*out, priors.data(), priors.size() * sizeof(double));
    });
}

void sybil_buffer_free(double* buffer) { delete[] buffer; }

sybil_status sybil_auc(const sybil_instance* inst, const double* scores,
                       size_t count, const sybil_training* exclude,
                       double* auc_out, size_t* n_pos, size_t* n_neg) {
    if (!inst || !scores || !auc_out)
        return usage_error("sybil_auc: null argument");
    return guarded([&] {
        const std::size_t n = inst->inst.graph.node_count();
        if (count < n)
            sybil::throw_data("scores cover fewer nodes than the instance");
        std::vector<bool> excluded(n, false);
        if (exclude) {
            for (auto u : exclude->ts.benign) excluded[u] = true;
            for (auto u : exclude->ts.sybil) excluded[u] = true;
        }
        std::vector<sybil::NodeId> test_nodes;
        test_nodes.reserve(n);
        for (sybil::NodeId u = 0; u < n; ++u)
            if (!excluded[u]) test_nodes.push_back(u);
        const auto result = sybil::auc(std::span<const double>(scores, count),
                                       inst->inst.truth, test_nodes);
        *auc_out = result.auc;
        if (n_pos) *n_pos = result.n_pos;
        if (n_neg) *n_neg = result.n_neg;
    });
}

sybil_status sybil_top_k_fractions(const sybil_instance* inst,
                                   const double* scores, size_t count,
                                   size_t k_total, size_t interval,
                                   double* fractions, size_t* interval_count) {
    if (!inst || !scores || !fractions)
        return usage_error("sybil_top_k_fractions: null argument");
    return guarded([&] {
        const auto result = sybil::top_k_fractions(
            std::span<const double>(scores, count), inst->inst.truth, k_total,
            interval);
        for (std::size_t i = 0; i < result.fractions.size(); ++i)
            fractions[i] = result.fractions[i];
        if (interval_count) *interval_count = result.fractions.size();
    });
}

/* ---- analysis ----------------------------------------------------------- */

sybil_status sybil_check_convergence(const sybil_graph* g,
                                     const char* weighting, double w_hat,
                                     sybil_convergence_report* out) {
    if (!g || !out) return usage_error("sybil_check_convergence: null argument");
    return guarded([&] {
        const auto report = sybil::convergence_report(
            g->g, parse_weighting(g, weighting, w_hat));
        out->spectral_radius = report.spectral_radius_estimate;
        out->inf_norm = report.inf_norm;
        out->sufficient_ok = report.sufficient_ok ? 1 : 0;
        out->necessary_ok = report.necessary_ok ? 1 : 0;
        out->iterations_used = report.iterations_used;
        out->power_converged = report.power_converged ? 1 : 0;
    });
}

sybil_status sybil_suggest_constant_weight(const sybil_graph* g, int use_avg,
                                           double* out) {
    if (!g || !out)
        return usage_error("sybil_suggest_constant_weight: null argument");
    return guarded(
        [&] { *out = sybil::suggest_constant_weight(g->g, use_avg != 0); });
}

sybil_status sybil_security_bound(const sybil_instance* inst,
                                  sybil_bound_report* out) {
    if (!inst || !out) return usage_error("sybil_security_bound: null argument");
    return guarded([&] {
        const auto report = sybil::security_bound(inst->inst);
        out->attack_edges = report.attack_edges;
        out->avg_sybil_degree = report.avg_sybil_degree;
        out->node_count = report.node_count;
        out->bound = report.bound;
    });
}

sybil_status sybil_mixing_sim(const char* model, uint32_t region_nodes,
                              double avg_degree, uint64_t attack_edges,
                              uint32_t labeled_benign, uint64_t seed,
                              double* coeff_variation,
                              double* negative_fraction,
                              uint32_t* sample_count) {
    if (!model) return usage_error("sybil_mixing_sim: null model");
    return guarded([&] {
        const std::string name = model;
        sybil::RegionModel m;
        if (name == "er") m = sybil::RegionModel::Er;
        else if (name == "pa") m = sybil::RegionModel::Pa;
        else sybil::throw_usage("model must be 'er' or 'pa'");
        const auto result = sybil::benign_mixing_sim(
            m, region_nodes, avg_degree, attack_edges, labeled_benign, seed);
        if (coeff_variation) *coeff_variation = result.coeff_variation;
        if (negative_fraction) {
            std::size_t neg = 0;
            for (double v : result.unlabeled_benign_residuals)
                if (v < 0.0) ++neg;
            *negative_fraction =
                result.unlabeled_benign_residuals.empty()
                    ? 0.0
                    : static_cast<double>(neg) /
                          static_cast<double>(
                              result.unlabeled_benign_residuals.size());
        }
        if (sample_count)
            *sample_count = static_cast<uint32_t>(
                result.unlabeled_benign_residuals.size());
    });
}

/* ---- experiment drivers -------------------------------------------------- */

void sybil_sweep_spec_init(sybil_sweep_spec* spec) {
    if (!spec) return;
    std::memset(spec, 0, sizeof(*spec));
    spec->region_nodes = 1000;
    spec->er_avg_degree = 40.0;
    spec->pa_edges_per_node = 20;
    spec->attack_edges = 1000;
    spec->train_count = 200;
    spec->repetitions = 5;
    spec->threads = 1;
    sybil_engine_params_init(&spec->params);
}

sybil_status sybil_run_sweep(const sybil_sweep_spec* spec,
                             const char* csv_path) {
    if (!spec || !csv_path) return usage_error("sybil_run_sweep: null argument");
    return guarded([&] {
        sybil::ExperimentSpec es;
        if (spec->base_graph_path) {
            es.instance.kind = sybil::InstanceSpec::Kind::Replica;
            es.instance.base = sybil::load_edge_list(spec->base_graph_path).graph;
        } else {
            const std::string model = spec->pair_model ? spec->pair_model : "er";
            if (model == "er")
                es.instance.kind = sybil::InstanceSpec::Kind::ErPair;
            else if (model == "pa")
                es.instance.kind = sybil::InstanceSpec::Kind::PaPair;
            else
                sybil::throw_usage("pair model must be 'er' or 'pa'");
        }
        es.instance.region_nodes = spec->region_nodes;
        es.instance.er_avg_degree = spec->er_avg_degree;
        es.instance.pa_edges_per_node = spec->pa_edges_per_node;
        es.instance.attack_edges = spec->attack_edges;
        es.train_count = spec->train_count;
        es.noise_tau = spec->noise_tau;
        es.engines = to_engines(spec->engines, spec->engine_count);
        es.params = to_params(&spec->params);
        es.var = sybil::sweep_var_from_name(
            spec->sweep_var ? spec->sweep_var : "attack-edges");
        if (!spec->values || spec->value_count == 0)
            sybil::throw_usage("sweep requires at least one value");
        es.values.assign(spec->values, spec->values + spec->value_count);
        es.repetitions = spec->repetitions;
        if (spec->seeds && spec->seed_count > 0)
            es.seeds.assign(spec->seeds, spec->seeds + spec->seed_count);
        es.threads = spec->threads;

        write_text(csv_path, sybil::sweep_csv(sybil::run_sweep(es)));
    });
}

sybil_status sybil_run_trace(const sybil_graph* g, const sybil_training* ts,
                             const char* const* engines, size_t engine_count,
                             const sybil_engine_params* params, int iters,
                             int threads, const char* csv_path) {
    if (!g || !ts || !csv_path) return usage_error("sybil_run_trace: null argument");
    return guarded([&] {
        const auto rows = sybil::run_convergence_trace(
            g->g, ts->ts, to_engines(engines, engine_count), to_params(params),
            iters, threads);
        write_text(csv_path, sybil::trace_csv(rows));
    });
}

sybil_status sybil_run_bench(const uint64_t* edge_counts,
                             size_t edge_count_count,
                             const char* const* engines, size_t engine_count,
                             const sybil_engine_params* params, int iters,
                             double avg_degree, uint64_t seed, int repeats,
                             const char* csv_path) {
    if (!edge_counts || edge_count_count == 0 || !csv_path)
        return usage_error("sybil_run_bench: null argument");
    return guarded([&] {
        const auto rows = sybil::run_scaling_bench(
            std::span<const uint64_t>(edge_counts, edge_count_count),
            to_engines(engines, engine_count), to_params(params), iters,
            avg_degree, seed, repeats);
        write_text(csv_path, sybil::bench_csv(rows));
    });
}

} /* extern "C" */
