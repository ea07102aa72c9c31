#include "sybil/labels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sybil/errors.hpp"
#include "sybil/rng.hpp"

namespace sybil {

const char* label_name(Label l) {
    switch (l) {
        case Label::Benign: return "benign";
        case Label::Sybil: return "sybil";
        default: return "unlabeled";
    }
}

Label label_from_name(const std::string& name) {
    if (name == "benign") return Label::Benign;
    if (name == "sybil") return Label::Sybil;
    if (name == "unlabeled") return Label::Unlabeled;
    throw_data("unknown label '" + name + "'");
}

std::size_t LabelSet::count(Label l) const {
    return static_cast<std::size_t>(
        std::count(labels.begin(), labels.end(), l));
}

std::vector<NodeId> LabelSet::nodes_with(Label l) const {
    std::vector<NodeId> out;
    for (NodeId u = 0; u < labels.size(); ++u)
        if (labels[u] == l) out.push_back(u);
    return out;
}

TrainingSet sample_training(const LabelSet& truth, std::size_t count,
                            std::uint64_t seed) {
    const std::size_t n = truth.size();
    if (count > n)
        throw_usage("training count " + std::to_string(count) +
                    " exceeds node count " + std::to_string(n));
    std::vector<NodeId> pool(n);
    std::iota(pool.begin(), pool.end(), NodeId{0});
    Rng rng(seed);
    rng.partial_shuffle(pool, count);

    TrainingSet ts;
    for (std::size_t i = 0; i < count; ++i) {
        const NodeId u = pool[i];
        if (truth[u] == Label::Benign) ts.benign.push_back(u);
        else if (truth[u] == Label::Sybil) ts.sybil.push_back(u);
    }
    std::sort(ts.benign.begin(), ts.benign.end());
    std::sort(ts.sybil.begin(), ts.sybil.end());
    return ts;
}

TrainingSet inject_noise(const TrainingSet& ts, double tau,
                         std::uint64_t seed) {
    if (!(tau >= 0.0 && tau <= 0.5))
        throw_usage("noise fraction must be in [0, 0.5]");
    const auto n_flip_sybil =
        static_cast<std::size_t>(std::floor(tau * ts.sybil.size()));
    const auto n_flip_benign =
        static_cast<std::size_t>(std::floor(tau * ts.benign.size()));

    Rng rng(seed);
    std::vector<NodeId> sybils = ts.sybil;
    std::vector<NodeId> benigns = ts.benign;
    rng.partial_shuffle(sybils, n_flip_sybil);
    rng.partial_shuffle(benigns, n_flip_benign);

    TrainingSet out;
    out.benign.assign(benigns.begin() + n_flip_benign, benigns.end());
    out.benign.insert(out.benign.end(), sybils.begin(),
                      sybils.begin() + n_flip_sybil);
    out.sybil.assign(sybils.begin() + n_flip_sybil, sybils.end());
    out.sybil.insert(out.sybil.end(), benigns.begin(),
                     benigns.begin() + n_flip_benign);
    std::sort(out.benign.begin(), out.benign.end());
    std::sort(out.sybil.begin(), out.sybil.end());
    return out;
}

std::vector<double> assign_priors(const TrainingSet& ts, double theta,
                                  std::size_t node_count) {
    if (!(theta > 0.0 && theta <= 0.5))
        throw_usage("theta must be in (0, 0.5]");
    std::vector<double> q_hat(node_count, 0.0);
    for (NodeId u : ts.sybil) {
        if (u >= node_count) throw_data("training node id out of range");
        q_hat[u] = theta;
    }
    for (NodeId u : ts.benign) {
        if (u >= node_count) throw_data("training node id out of range");
        q_hat[u] = -theta;
    }
    return q_hat;
}

TrainingSet balance_training(const TrainingSet& ts, std::uint64_t seed) {
    if (ts.benign.empty() || ts.sybil.empty())
        throw_usage("balance_training requires both classes to be non-empty");
    const std::size_t target = std::min(ts.benign.size(), ts.sybil.size());
    TrainingSet out = ts;
    Rng rng(seed);
    auto shrink = [&](std::vector<NodeId>& side) {
        if (side.size() <= target) return;
        rng.partial_shuffle(side, target);
        side.resize(target);
        std::sort(side.begin(), side.end());
    };
    shrink(out.benign);
    shrink(out.sybil);
    return out;
}

}  // namespace sybil
