#include "sybil/graph.hpp"

#include <algorithm>
#include <fstream>
#include <unordered_map>

#include "sybil/errors.hpp"

namespace sybil {

Graph Graph::from_edges(NodeId node_count, std::vector<Edge> edges) {
    for (auto& [u, v] : edges) {
        if (u >= node_count || v >= node_count)
            throw_data("edge endpoint " + std::to_string(std::max(u, v)) +
                       " out of range (node count " +
                       std::to_string(node_count) + ")");
        if (u > v) std::swap(u, v);
    }
    std::erase_if(edges, [](const Edge& e) { return e.first == e.second; });
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    auto data = std::make_shared<Data>();
    data->node_count = node_count;
    data->edge_count = edges.size();
    data->offsets.assign(static_cast<std::size_t>(node_count) + 1, 0);
    for (const auto& [u, v] : edges) {
        ++data->offsets[u + 1];
        ++data->offsets[v + 1];
    }
    for (NodeId u = 0; u < node_count; ++u)
        data->offsets[u + 1] += data->offsets[u];
    data->adjacency.resize(2 * edges.size());
    std::vector<std::uint64_t> cursor(data->offsets.begin(),
                                      data->offsets.end() - 1);
    for (const auto& [u, v] : edges) {
        data->adjacency[cursor[u]++] = v;
        data->adjacency[cursor[v]++] = u;
    }
    // Rows come out sorted because the edge list is sorted by (min, max) and
    // each row receives targets in nondecreasing order only for the first
    // endpoint; sort rows to make the order unconditional.
    for (NodeId u = 0; u < node_count; ++u) {
        auto begin = data->adjacency.begin() + data->offsets[u];
        auto end = data->adjacency.begin() + data->offsets[u + 1];
        std::sort(begin, end);
        data->max_degree = std::max(
            data->max_degree, static_cast<std::uint32_t>(end - begin));
    }
    Graph g;
    g.d_ = std::move(data);
    return g;
}

bool Graph::has_edge(NodeId u, NodeId v) const {
    if (!d_ || u >= node_count() || v >= node_count()) return false;
    auto row = neighbors(u);
    return std::binary_search(row.begin(), row.end(), v);
}

std::vector<Edge> Graph::edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count());
    for (NodeId u = 0; u < node_count(); ++u)
        for (NodeId v : neighbors(u))
            if (u < v) out.emplace_back(u, v);
    return out;
}

GraphStats stats(const Graph& g) {
    GraphStats s;
    s.node_count = g.node_count();
    s.edge_count = g.edge_count();
    s.avg_degree = g.avg_degree();
    s.max_degree = g.max_degree();
    return s;
}

std::uint64_t volume(const Graph& g, std::span<const NodeId> nodes) {
    std::uint64_t total = 0;
    for (NodeId u : nodes) {
        if (u >= g.node_count())
            throw_data("volume: node id " + std::to_string(u) +
                       " out of range");
        total += g.degree(u);
    }
    return total;
}

namespace {

bool parse_u64(const char*& p, const char* end, std::uint64_t& out) {
    while (p < end && (*p == ' ' || *p == '\t')) ++p;
    if (p == end || *p < '0' || *p > '9') return false;
    std::uint64_t v = 0;
    while (p < end && *p >= '0' && *p <= '9') {
        v = v * 10 + static_cast<std::uint64_t>(*p - '0');
        ++p;
    }
    out = v;
    return true;
}

}  // namespace

LoadedGraph load_edge_list(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw_data("cannot open edge list: " + path.string());

    std::vector<std::pair<std::uint64_t, std::uint64_t>> raw_edges;
    std::string line;
    std::size_t line_no = 0;

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const char* p = line.data();
        const char* end = p + line.size();
        while (p < end && (*p == ' ' || *p == '\t')) ++p;
        if (p == end || *p == '#') continue;
        std::uint64_t a = 0, b = 0;
        if (!parse_u64(p, end, a) || !parse_u64(p, end, b))
            throw_data("malformed edge list line " + std::to_string(line_no) +
                       " in " + path.string());
        while (p < end && (*p == ' ' || *p == '\t')) ++p;
        if (p != end)
            throw_data("malformed edge list line " + std::to_string(line_no) +
                       " in " + path.string() + " (trailing data)");
        raw_edges.emplace_back(a, b);
    }

    // Dense ids follow the sorted order of the external ids, so reloading a
    // file that is already dense is the identity remap.
    LoadedGraph result;
    for (const auto& [a, b] : raw_edges) {
        result.external_ids.push_back(a);
        result.external_ids.push_back(b);
    }
    std::sort(result.external_ids.begin(), result.external_ids.end());
    result.external_ids.erase(
        std::unique(result.external_ids.begin(), result.external_ids.end()),
        result.external_ids.end());
    if (result.external_ids.empty())
        throw_data("empty graph: " + path.string());
    if (result.external_ids.size() > 0xFFFFFFFFull)
        throw_data("too many nodes in " + path.string());

    std::unordered_map<std::uint64_t, NodeId> remap;
    remap.reserve(result.external_ids.size());
    for (NodeId dense = 0; dense < result.external_ids.size(); ++dense)
        remap.emplace(result.external_ids[dense], dense);

    std::vector<Edge> edges;
    edges.reserve(raw_edges.size());
    for (const auto& [a, b] : raw_edges)
        edges.emplace_back(remap.at(a), remap.at(b));

    result.graph = Graph::from_edges(
        static_cast<NodeId>(result.external_ids.size()), std::move(edges));
    return result;
}

void save_edge_list(const Graph& g, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw_data("cannot write edge list: " + path.string());
    for (NodeId u = 0; u < g.node_count(); ++u)
        for (NodeId v : g.neighbors(u))
            if (u < v) out << u << ' ' << v << '\n';
    if (!out) throw_data("write failed: " + path.string());
}

void save_id_map(const LoadedGraph& g, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw_data("cannot write id map: " + path.string());
    for (NodeId dense = 0; dense < g.external_ids.size(); ++dense)
        out << g.external_ids[dense] << ' ' << dense << '\n';
    if (!out) throw_data("write failed: " + path.string());
}

}  // namespace sybil
