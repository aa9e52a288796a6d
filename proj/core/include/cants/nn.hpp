#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "cants/genome.hpp"
#include "cants/matrix.hpp"
#include "cants/rng.hpp"

namespace cants {

/// Sentinel fitness for candidates whose training diverged.
inline constexpr double rejected_fitness = std::numeric_limits<double>::infinity();

struct RnnNode {
    NodeKind kind = NodeKind::hidden;
    std::size_t io_index = 0;
    /// Index into the parameter vector, or npos for nodes without bias.
    std::size_t bias = npos;

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

struct RnnEdge {
    std::size_t src = 0; ///< position in topological order
    std::size_t dst = 0;
    std::size_t weight = 0; ///< parameter index
    std::size_t time_skip = 0; ///< 0 for feed-forward
};

/// Executable form of a genome: nodes in topological order, flat parameters.
///
/// Parameter layout: feed-forward weights, then recurrent weights, then hidden
/// biases. Hidden nodes use tanh, input and output nodes are identity.
struct RnnGraph {
    std::size_t n_inputs = 0;
    std::size_t n_outputs = 0;
    std::vector<RnnNode> nodes;
    /// Incoming edges grouped by destination, in node order.
    std::vector<RnnEdge> edges;
    /// edges[edge_begin[n] .. edge_begin[n+1]) are the in-edges of node n.
    std::vector<std::size_t> edge_begin;
    std::size_t n_params = 0;
    /// Position in `nodes` of output i, or npos when the genome has no such output.
    std::vector<std::size_t> output_node;
};

struct TrainConfig {
    std::size_t epochs = 30;
    double learning_rate = 0.01;
    double gradient_clip = 1.0;
    double weight_init_scale = 0.1;
    double validation_fraction = 0.2;

    void validate() const;
};

RnnGraph compile(const Genome& genome);

/// Uniform(-scale, scale) weights, zero biases.
std::vector<double> initial_weights(const RnnGraph& graph, double scale, Rng& rng);

/// Predictions for every time step; rows of `series` are steps.
Matrix forward(const RnnGraph& graph, std::span<const double> weights, const Matrix& series);

double mse(const Matrix& predictions, const Matrix& targets);

/// Mean squared error over all steps and outputs, with its gradient.
struct LossGradient {
    double loss = 0.0;
    std::vector<double> gradient;
};

/// Full-sequence backpropagation through time.
LossGradient loss_and_gradient(const RnnGraph& graph, std::span<const double> weights, const Matrix& series,
                               const Matrix& targets);

struct TrainResult {
    std::vector<double> weights;
    double validation_mse = rejected_fitness;
    double initial_train_mse = 0.0;
    double final_train_mse = 0.0;
};

/// Batch gradient descent with global-norm clipping on the leading
/// (1 - validation_fraction) rows; validation MSE on the trailing rows.
TrainResult train_bptt(const RnnGraph& graph, const Matrix& series, const Matrix& targets, const TrainConfig& cfg,
                       Rng& rng);

/// Same as train_bptt but starting from the given weights.
TrainResult train_from(const RnnGraph& graph, std::vector<double> weights, const Matrix& series,
                       const Matrix& targets, const TrainConfig& cfg);

/// Largest relative disagreement between the analytic gradient and central
/// finite differences with step `epsilon`.
double grad_check(const RnnGraph& graph, std::span<const double> weights, const Matrix& series,
                  const Matrix& targets, double epsilon = 1e-5);

/// Genome plus trained weights.
nlohmann::json model_to_json(const Genome& genome, std::span<const double> weights);

} // namespace cants
