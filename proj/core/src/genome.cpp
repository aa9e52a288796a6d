#include "cants/genome.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "cants/error.hpp"

namespace cants {

std::size_t Genome::hidden_count() const
{
    return static_cast<std::size_t>(
        std::count_if(nodes.begin(), nodes.end(), [](const GenomeNode& n) { return n.kind == NodeKind::hidden; }));
}

bool is_anchor(const Point3& p) { return p.y == 0.0 || p.y == 1.0; }

Clustering cluster_points(std::span<const Point3> points, double radius)
{
    if (!(radius > 0.0))
        throw domain_error("cluster radius must be positive");
    Clustering out;
    out.assignment.reserve(points.size());
    std::vector<bool> anchor_cluster;
    const double r2 = radius * radius;

    for (const auto& p : points) {
        const bool anchor = is_anchor(p);
        std::size_t found = out.centroids.size();
        for (std::size_t c = 0; c < out.centroids.size(); ++c) {
            if (anchor_cluster[c] != anchor)
                continue;
            const bool joins = anchor ? out.centroids[c] == p : distance_squared(out.centroids[c], p) <= r2;
            if (joins) {
                found = c;
                break;
            }
        }
        if (found == out.centroids.size()) {
            out.centroids.push_back(p);
            out.sizes.push_back(1);
            anchor_cluster.push_back(anchor);
        } else if (!anchor) {
            auto& c = out.centroids[found];
            const double n = static_cast<double>(++out.sizes[found]);
            c = {c.x + (p.x - c.x) / n, c.y + (p.y - c.y) / n, c.z + (p.z - c.z) / n};
        } else {
            ++out.sizes[found];
        }
        out.assignment.push_back(found);
    }
    return out;
}

std::size_t time_skip_for(double z, std::size_t max_recurrent_depth)
{
    const double raw = 1.0 + std::floor(z * static_cast<double>(max_recurrent_depth));
    return static_cast<std::size_t>(std::clamp(raw, 1.0, static_cast<double>(max_recurrent_depth)));
}

namespace {

/// Nodes reachable forward from `sources` and backward from `sinks`.
std::vector<bool> on_route(std::size_t n, const std::vector<FeedForwardEdge>& edges, const std::vector<bool>& sources,
                           const std::vector<bool>& sinks)
{
    std::vector<std::vector<std::size_t>> out(n), in(n);
    for (const auto& e : edges) {
        out[e.src].push_back(e.dst);
        in[e.dst].push_back(e.src);
    }
    auto sweep = [n](const std::vector<bool>& start, const std::vector<std::vector<std::size_t>>& adj) {
        std::vector<bool> seen(start);
        std::vector<std::size_t> stack;
        for (std::size_t i = 0; i < n; ++i)
            if (seen[i])
                stack.push_back(i);
        while (!stack.empty()) {
            const auto v = stack.back();
            stack.pop_back();
            for (auto w : adj[v])
                if (!seen[w]) {
                    seen[w] = true;
                    stack.push_back(w);
                }
        }
        return seen;
    };
    const auto fwd = sweep(sources, out);
    const auto bwd = sweep(sinks, in);
    std::vector<bool> keep(n);
    for (std::size_t i = 0; i < n; ++i)
        keep[i] = fwd[i] && bwd[i];
    return keep;
}

/// Node ids sorted by centroid depth, then lateral position, then id.
std::vector<std::size_t> depth_order(const std::vector<GenomeNode>& nodes)
{
    std::vector<std::size_t> order(nodes.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto& ca = nodes[a].centroid;
        const auto& cb = nodes[b].centroid;
        if (ca.y != cb.y)
            return ca.y < cb.y;
        if (ca.x != cb.x)
            return ca.x < cb.x;
        return a < b;
    });
    return order;
}

} // namespace

std::optional<Genome> build_genome(std::span<const AntPath> paths, std::size_t n_inputs, std::size_t n_outputs,
                                   double cluster_radius, std::size_t max_recurrent_depth)
{
    if (paths.empty())
        throw domain_error("build_genome needs at least one path");
    if (max_recurrent_depth < 1)
        throw domain_error("max_recurrent_depth must be at least 1");

    std::vector<Point3> points;
    for (const auto& path : paths) {
        if (path.points.size() < 2 || path.points.front().y != 0.0 || path.points.back().y != 1.0)
            throw domain_error("ant path must run from an input anchor to an output anchor");
        if (path.feature_idx >= n_inputs || path.output_idx >= n_outputs)
            throw domain_error("ant path anchor index out of range");
        points.insert(points.end(), path.points.begin(), path.points.end());
    }
    const auto clusters = cluster_points(points, cluster_radius);
    const std::size_t n_clusters = clusters.centroids.size();

    std::vector<NodeKind> kind(n_clusters, NodeKind::hidden);
    std::vector<std::size_t> io_index(n_clusters, 0);
    std::set<FeedForwardEdge> edge_set;
    std::size_t offset = 0;
    for (const auto& path : paths) {
        const auto first = clusters.assignment[offset];
        const auto last = clusters.assignment[offset + path.points.size() - 1];
        kind[first] = NodeKind::input;
        io_index[first] = path.feature_idx;
        kind[last] = NodeKind::output;
        io_index[last] = path.output_idx;
        for (std::size_t i = 0; i + 1 < path.points.size(); ++i) {
            const auto a = clusters.assignment[offset + i];
            const auto b = clusters.assignment[offset + i + 1];
            if (a != b && clusters.centroids[b].y > clusters.centroids[a].y)
                edge_set.insert({a, b});
        }
        offset += path.points.size();
    }

    std::vector<FeedForwardEdge> edges(edge_set.begin(), edge_set.end());
    std::vector<bool> sources(n_clusters), sinks(n_clusters);
    for (std::size_t c = 0; c < n_clusters; ++c) {
        sources[c] = kind[c] == NodeKind::input;
        sinks[c] = kind[c] == NodeKind::output;
    }
    const auto keep = on_route(n_clusters, edges, sources, sinks);
    if (std::none_of(keep.begin(), keep.end(), [](bool k) { return k; }))
        return std::nullopt;

    Genome g;
    g.n_inputs = n_inputs;
    g.n_outputs = n_outputs;
    std::vector<std::size_t> new_id(n_clusters, static_cast<std::size_t>(-1));
    for (std::size_t c = 0; c < n_clusters; ++c) {
        if (!keep[c])
            continue;
        new_id[c] = g.nodes.size();
        g.nodes.push_back({g.nodes.size(), kind[c], io_index[c], clusters.centroids[c], 0});
    }
    for (const auto& e : edges)
        if (keep[e.src] && keep[e.dst])
            g.ff_edges.push_back({new_id[e.src], new_id[e.dst]});
    std::sort(g.ff_edges.begin(), g.ff_edges.end());

    // Longest-path layering; edges always go to greater depth, so depth order is topological.
    std::vector<std::vector<std::size_t>> preds(g.nodes.size());
    for (const auto& e : g.ff_edges)
        preds[e.dst].push_back(e.src);
    for (auto id : depth_order(g.nodes)) {
        std::size_t rank = 0;
        for (auto p : preds[id])
            rank = std::max(rank, g.nodes[p].layer_rank + 1);
        g.nodes[id].layer_rank = rank;
    }

    for (const auto& n : g.nodes)
        if (n.kind == NodeKind::hidden)
            g.rec_edges.push_back({n.id, n.id, time_skip_for(n.centroid.z, max_recurrent_depth)});

    g.provenance_paths.assign(paths.begin(), paths.end());
    return g;
}

std::string check_genome(const Genome& g, std::size_t max_recurrent_depth)
{
    const std::size_t n = g.nodes.size();
    for (std::size_t i = 0; i < n; ++i) {
        const auto& node = g.nodes[i];
        if (node.id != i)
            return fmt::format("node {} has id {}", i, node.id);
        if (node.kind == NodeKind::input && (node.centroid.y != 0.0 || node.io_index >= g.n_inputs))
            return fmt::format("input node {} is not a valid input anchor", i);
        if (node.kind == NodeKind::output && (node.centroid.y != 1.0 || node.io_index >= g.n_outputs))
            return fmt::format("output node {} is not a valid output anchor", i);
        if (node.kind == NodeKind::hidden && !(node.centroid.y > 0.0 && node.centroid.y < 1.0))
            return fmt::format("hidden node {} lies on a boundary level", i);
    }
    std::set<FeedForwardEdge> ff;
    for (const auto& e : g.ff_edges) {
        if (e.src >= n || e.dst >= n)
            return "feed-forward edge references a missing node";
        if (!(g.nodes[e.dst].centroid.y > g.nodes[e.src].centroid.y))
            return fmt::format("feed-forward edge {}->{} does not increase depth", e.src, e.dst);
        if (!ff.insert(e).second)
            return fmt::format("duplicate feed-forward edge {}->{}", e.src, e.dst);
    }
    std::set<RecurrentEdge> rec;
    for (const auto& e : g.rec_edges) {
        if (e.src >= n || e.dst >= n)
            return "recurrent edge references a missing node";
        if (e.time_skip < 1 || e.time_skip > max_recurrent_depth)
            return fmt::format("recurrent edge {}->{} has time skip {}", e.src, e.dst, e.time_skip);
        if (!rec.insert(e).second)
            return "duplicate recurrent edge";
    }
    std::vector<bool> sources(n), sinks(n);
    for (std::size_t i = 0; i < n; ++i) {
        sources[i] = g.nodes[i].kind == NodeKind::input;
        sinks[i] = g.nodes[i].kind == NodeKind::output;
    }
    const auto keep = on_route(n, g.ff_edges, sources, sinks);
    for (std::size_t i = 0; i < n; ++i)
        if (!keep[i])
            return fmt::format("node {} is not on an input->output route", i);
    if (n == 0)
        return "genome has no nodes";
    return {};
}

namespace {

const char* kind_name(NodeKind k)
{
    switch (k) {
    case NodeKind::input:
        return "input";
    case NodeKind::output:
        return "output";
    case NodeKind::hidden:
        break;
    }
    return "hidden";
}

NodeKind kind_from(const std::string& s)
{
    if (s == "input")
        return NodeKind::input;
    if (s == "output")
        return NodeKind::output;
    if (s == "hidden")
        return NodeKind::hidden;
    throw domain_error("unknown node kind '" + s + "'");
}

nlohmann::json point_json(const Point3& p) { return nlohmann::json::array({p.x, p.y, p.z}); }

Point3 point_from(const nlohmann::json& j) { return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()}; }

} // namespace

nlohmann::json genome_to_json(const Genome& g)
{
    nlohmann::json doc;
    doc["n_inputs"] = g.n_inputs;
    doc["n_outputs"] = g.n_outputs;
    auto nodes = nlohmann::json::array();
    for (const auto& n : g.nodes)
        nodes.push_back({{"id", n.id},
                         {"kind", kind_name(n.kind)},
                         {"io_index", n.io_index},
                         {"centroid", point_json(n.centroid)},
                         {"layer_rank", n.layer_rank}});
    doc["nodes"] = std::move(nodes);
    auto ff = nlohmann::json::array();
    for (const auto& e : g.ff_edges)
        ff.push_back({e.src, e.dst});
    doc["ff_edges"] = std::move(ff);
    auto rec = nlohmann::json::array();
    for (const auto& e : g.rec_edges)
        rec.push_back({e.src, e.dst, e.time_skip});
    doc["rec_edges"] = std::move(rec);
    auto paths = nlohmann::json::array();
    for (const auto& p : g.provenance_paths) {
        auto pts = nlohmann::json::array();
        for (const auto& pt : p.points)
            pts.push_back(point_json(pt));
        paths.push_back({{"feature_idx", p.feature_idx}, {"output_idx", p.output_idx}, {"points", std::move(pts)}});
    }
    doc["provenance_paths"] = std::move(paths);
    return doc;
}

Genome genome_from_json(const nlohmann::json& doc)
{
    Genome g;
    g.n_inputs = doc.at("n_inputs").get<std::size_t>();
    g.n_outputs = doc.at("n_outputs").get<std::size_t>();
    for (const auto& n : doc.at("nodes"))
        g.nodes.push_back({n.at("id").get<std::size_t>(), kind_from(n.at("kind").get<std::string>()),
                           n.at("io_index").get<std::size_t>(), point_from(n.at("centroid")),
                           n.at("layer_rank").get<std::size_t>()});
    for (const auto& e : doc.at("ff_edges"))
        g.ff_edges.push_back({e.at(0).get<std::size_t>(), e.at(1).get<std::size_t>()});
    for (const auto& e : doc.at("rec_edges"))
        g.rec_edges.push_back({e.at(0).get<std::size_t>(), e.at(1).get<std::size_t>(), e.at(2).get<std::size_t>()});
    if (doc.contains("provenance_paths"))
        for (const auto& p : doc.at("provenance_paths")) {
            AntPath path;
            path.feature_idx = p.at("feature_idx").get<std::size_t>();
            path.output_idx = p.at("output_idx").get<std::size_t>();
            for (const auto& pt : p.at("points"))
                path.points.push_back(point_from(pt));
            g.provenance_paths.push_back(std::move(path));
        }
    return g;
}

} // namespace cants
