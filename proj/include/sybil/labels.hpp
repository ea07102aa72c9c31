#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sybil/graph.hpp"

namespace sybil {

enum class Label : std::uint8_t { Benign, Sybil, Unlabeled };

const char* label_name(Label l);
Label label_from_name(const std::string& name);

// Ground-truth labels, one per node.
struct LabelSet {
    std::vector<Label> labels;

    std::size_t size() const { return labels.size(); }
    Label operator[](NodeId u) const { return labels[u]; }
    std::size_t count(Label l) const;
    std::vector<NodeId> nodes_with(Label l) const;
};

// Labeled training nodes, split by class. Vectors are kept sorted so that
// downstream sampling and propagation are deterministic.
struct TrainingSet {
    std::vector<NodeId> benign;
    std::vector<NodeId> sybil;

    std::size_t size() const { return benign.size() + sybil.size(); }
};

// Draws `count` nodes uniformly at random without replacement and places
// each on the side given by its ground-truth label. Unlabeled nodes are
// drawn but placed on neither side (only possible with partial label files).
// Sampling here and below is deterministic per seed but keyed to node ids:
// relabeling the nodes changes which ones are drawn.
TrainingSet sample_training(const LabelSet& truth, std::size_t count,
                            std::uint64_t seed);

// Mislabels floor(tau*|sybil|) training Sybils as benign and
// floor(tau*|benign|) training benign nodes as Sybils, tau in [0, 0.5].
TrainingSet inject_noise(const TrainingSet& ts, double tau,
                         std::uint64_t seed);

// Residual prior vector: +theta on labeled Sybils, -theta on labeled benign
// nodes, 0 elsewhere. theta in (0, 0.5].
std::vector<double> assign_priors(const TrainingSet& ts, double theta,
                                  std::size_t node_count);

// Uniformly subsamples the larger side down to the smaller side's size.
TrainingSet balance_training(const TrainingSet& ts, std::uint64_t seed);

}  // namespace sybil
