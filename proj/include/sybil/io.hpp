#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "sybil/engines.hpp"
#include "sybil/generate.hpp"
#include "sybil/graph.hpp"
#include "sybil/labels.hpp"

namespace sybil {

// Round-trip-exact, locale-independent float formatting used by every CSV
// writer so that repeated runs are byte-identical.
std::string format_double(double v);

// Labels file: "node_id label" per line, label in {benign, sybil}.
void save_labels(const LabelSet& labels, const std::filesystem::path& path);
LabelSet load_labels(const std::filesystem::path& path,
                     std::size_t node_count);

// Training file: same format as a labels file, restricted to training nodes.
void save_training(const TrainingSet& ts, const std::filesystem::path& path);
TrainingSet load_training(const std::filesystem::path& path,
                          std::size_t node_count);

// Priors file: "node_id probability" per line; nodes absent from the file
// get the undecided prior 0.5.
std::vector<double> load_priors(const std::filesystem::path& path,
                                std::size_t node_count);

// Attack edge file: "u v" per line.
void save_attack_edges(const std::vector<Edge>& edges,
                       const std::filesystem::path& path);
std::vector<Edge> load_attack_edges(const std::filesystem::path& path,
                                    std::size_t node_count);

// Instance directory: graph.txt + labels.txt + attack_edges.txt.
void save_instance(const SybilInstance& inst,
                   const std::filesystem::path& dir);
SybilInstance load_instance(const std::filesystem::path& dir);

// Scores CSV: header "node_id,score".
void save_scores(std::span<const double> scores,
                 const std::filesystem::path& path);
std::vector<double> load_scores(const std::filesystem::path& path);

// Trace CSV: header "iteration,relative_error".
void save_trace(std::span<const double> relative_errors,
                const std::filesystem::path& path);

// Manifest: "key=value" per line, insertion order preserved.
void save_manifest(
    const std::vector<std::pair<std::string, std::string>>& entries,
    const std::filesystem::path& path);

}  // namespace sybil
