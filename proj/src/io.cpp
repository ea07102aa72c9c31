#include "sybil/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "sybil/errors.hpp"

namespace sybil {

namespace fs = std::filesystem;

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::ifstream open_in(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw_data("cannot open file: " + path.string());
    return in;
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw_data("cannot write file: " + path.string());
    return out;
}

void finish_out(std::ofstream& out, const fs::path& path) {
    out.flush();
    if (!out) throw_data("write failed: " + path.string());
}

// Calls fn(line, line_no) for every non-blank, non-comment line.
template <typename Fn>
void for_each_line(const fs::path& path, Fn&& fn) {
    auto in = open_in(path);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::size_t start = line.find_first_not_of(" \t");
        if (start == std::string::npos || line[start] == '#') continue;
        fn(line, line_no);
    }
}

[[noreturn]] void bad_line(const fs::path& path, std::size_t line_no) {
    throw_data("malformed line " + std::to_string(line_no) + " in " +
               path.string());
}

}  // namespace

void save_labels(const LabelSet& labels, const fs::path& path) {
    auto out = open_out(path);
    for (NodeId u = 0; u < labels.size(); ++u) {
        if (labels[u] == Label::Unlabeled) continue;
        out << u << ' ' << label_name(labels[u]) << '\n';
    }
    finish_out(out, path);
}

LabelSet load_labels(const fs::path& path, std::size_t node_count) {
    LabelSet ls;
    ls.labels.assign(node_count, Label::Unlabeled);
    for_each_line(path, [&](const std::string& line, std::size_t line_no) {
        std::istringstream ss(line);
        std::uint64_t id = 0;
        std::string name;
        if (!(ss >> id >> name)) bad_line(path, line_no);
        if (id >= node_count)
            throw_data("node id " + std::to_string(id) + " out of range on line " +
                       std::to_string(line_no) + " in " + path.string());
        ls.labels[id] = label_from_name(name);
    });
    return ls;
}

void save_training(const TrainingSet& ts, const fs::path& path) {
    auto out = open_out(path);
    for (NodeId u : ts.benign) out << u << " benign\n";
    for (NodeId u : ts.sybil) out << u << " sybil\n";
    finish_out(out, path);
}

TrainingSet load_training(const fs::path& path, std::size_t node_count) {
    const LabelSet ls = load_labels(path, node_count);
    TrainingSet ts;
    ts.benign = ls.nodes_with(Label::Benign);
    ts.sybil = ls.nodes_with(Label::Sybil);
    return ts;
}

std::vector<double> load_priors(const fs::path& path,
                                std::size_t node_count) {
    std::vector<double> priors(node_count, 0.5);
    for_each_line(path, [&](const std::string& line, std::size_t line_no) {
        std::istringstream ss(line);
        std::uint64_t id = 0;
        double p = 0.0;
        if (!(ss >> id >> p)) bad_line(path, line_no);
        if (id >= node_count || !(p >= 0.0 && p <= 1.0))
            throw_data("invalid prior on line " + std::to_string(line_no) +
                       " in " + path.string());
        priors[id] = p;
    });
    return priors;
}

void save_attack_edges(const std::vector<Edge>& edges, const fs::path& path) {
    auto out = open_out(path);
    for (const auto& [u, v] : edges) out << u << ' ' << v << '\n';
    finish_out(out, path);
}

std::vector<Edge> load_attack_edges(const fs::path& path,
                                    std::size_t node_count) {
    std::vector<Edge> edges;
    for_each_line(path, [&](const std::string& line, std::size_t line_no) {
        std::istringstream ss(line);
        std::uint64_t u = 0, v = 0;
        if (!(ss >> u >> v)) bad_line(path, line_no);
        if (u >= node_count || v >= node_count)
            throw_data("attack edge endpoint out of range on line " +
                       std::to_string(line_no) + " in " + path.string());
        edges.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
    });
    return edges;
}

void save_instance(const SybilInstance& inst, const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    save_edge_list(inst.graph, dir / "graph.txt");
    save_labels(inst.truth, dir / "labels.txt");
    save_attack_edges(inst.attack_edges, dir / "attack_edges.txt");
}

SybilInstance load_instance(const fs::path& dir) {
    SybilInstance inst;
    inst.graph = load_edge_list(dir / "graph.txt").graph;
    inst.truth = load_labels(dir / "labels.txt", inst.graph.node_count());
    if (fs::exists(dir / "attack_edges.txt"))
        inst.attack_edges =
            load_attack_edges(dir / "attack_edges.txt", inst.graph.node_count());
    return inst;
}

void save_scores(std::span<const double> scores, const fs::path& path) {
    auto out = open_out(path);
    out << "node_id,score\n";
    for (std::size_t u = 0; u < scores.size(); ++u)
        out << u << ',' << format_double(scores[u]) << '\n';
    finish_out(out, path);
}

std::vector<double> load_scores(const fs::path& path) {
    std::vector<double> scores;
    bool header_seen = false;
    for_each_line(path, [&](const std::string& line, std::size_t line_no) {
        if (!header_seen) {
            header_seen = true;
            if (line.find("node_id") != std::string::npos) return;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos) bad_line(path, line_no);
        std::size_t id = 0;
        double score = 0.0;
        try {
            id = std::stoull(line.substr(0, comma));
            score = std::stod(line.substr(comma + 1));
        } catch (const std::exception&) {
            bad_line(path, line_no);
        }
        if (id >= scores.size()) scores.resize(id + 1, 0.0);
        scores[id] = score;
    });
    if (!header_seen) throw_data("empty scores file: " + path.string());
    return scores;
}

void save_trace(std::span<const double> relative_errors,
                const fs::path& path) {
    auto out = open_out(path);
    out << "iteration,relative_error\n";
    for (std::size_t t = 0; t < relative_errors.size(); ++t)
        out << (t + 1) << ',' << format_double(relative_errors[t]) << '\n';
    finish_out(out, path);
}

void save_manifest(
    const std::vector<std::pair<std::string, std::string>>& entries,
    const fs::path& path) {
    auto out = open_out(path);
    for (const auto& [key, value] : entries) out << key << '=' << value << '\n';
    finish_out(out, path);
}

}  // namespace sybil
