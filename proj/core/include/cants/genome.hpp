#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "cants/ants.hpp"
#include "cants/search_space.hpp"

namespace cants {

enum class NodeKind { input, hidden, output };

struct GenomeNode {
    std::size_t id = 0;
    NodeKind kind = NodeKind::hidden;
    /// Feature index for inputs, output index for outputs; unused for hidden nodes.
    std::size_t io_index = 0;
    Point3 centroid;
    /// Longest feed-forward distance from any input node.
    std::size_t layer_rank = 0;
};

struct FeedForwardEdge {
    std::size_t src = 0;
    std::size_t dst = 0;
    friend bool operator==(const FeedForwardEdge&, const FeedForwardEdge&) = default;
    friend auto operator<=>(const FeedForwardEdge&, const FeedForwardEdge&) = default;
};

struct RecurrentEdge {
    std::size_t src = 0;
    std::size_t dst = 0;
    std::size_t time_skip = 1;
    friend bool operator==(const RecurrentEdge&, const RecurrentEdge&) = default;
    friend auto operator<=>(const RecurrentEdge&, const RecurrentEdge&) = default;
};

/// Discrete recurrent network produced from a generation of ant paths.
///
/// Node ids are dense (0..nodes.size()-1). Feed-forward edges always point to a
/// node with strictly larger centroid depth, so they form a DAG.
struct Genome {
    std::size_t n_inputs = 0;
    std::size_t n_outputs = 0;
    std::vector<GenomeNode> nodes;
    std::vector<FeedForwardEdge> ff_edges;
    std::vector<RecurrentEdge> rec_edges;
    std::vector<AntPath> provenance_paths;

    std::size_t hidden_count() const;
};

/// Empty string when the genome satisfies every structural invariant,
/// otherwise a description of the first violation.
std::string check_genome(const Genome& g, std::size_t max_recurrent_depth);

struct Clustering {
    /// Cluster id of each input point.
    std::vector<std::size_t> assignment;
    std::vector<Point3> centroids;
    std::vector<std::size_t> sizes;
};

/// Depth-level points (y == 0 or y == 1) are anchors.
bool is_anchor(const Point3& p);

/// Fixed-radius agglomeration in input order.
///
/// A point joins the first cluster whose running-mean centroid lies within
/// `radius`, otherwise it founds a new cluster. Anchors only merge with
/// anchors at the identical position; non-anchors never join anchor clusters.
Clustering cluster_points(std::span<const Point3> points, double radius);

/// Self-loop time skip for a node at recurrent coordinate z.
std::size_t time_skip_for(double z, std::size_t max_recurrent_depth);

/// Clusters the paths into a genome; nullopt when no input->output route survives.
std::optional<Genome> build_genome(std::span<const AntPath> paths, std::size_t n_inputs, std::size_t n_outputs,
                                   double cluster_radius, std::size_t max_recurrent_depth);

nlohmann::json genome_to_json(const Genome& g);
Genome genome_from_json(const nlohmann::json& doc);

} // namespace cants
