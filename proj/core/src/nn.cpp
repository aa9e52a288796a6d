#include "cants/nn.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "cants/error.hpp"

namespace cants {

void TrainConfig::validate() const
{
    if (epochs < 1)
        throw domain_error("epochs must be at least 1");
    if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate))
        throw domain_error("learning_rate must be finite and non-negative");
    if (!(gradient_clip > 0.0))
        throw domain_error("gradient_clip must be positive");
    if (!(weight_init_scale >= 0.0))
        throw domain_error("weight_init_scale must be non-negative");
    if (!(validation_fraction > 0.0 && validation_fraction <= 0.5))
        throw domain_error(fmt::format("validation_fraction {} outside (0, 0.5]", validation_fraction));
}

RnnGraph compile(const Genome& genome)
{
    const std::size_t n = genome.nodes.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i)
        order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto& ca = genome.nodes[a].centroid;
        const auto& cb = genome.nodes[b].centroid;
        if (ca.y != cb.y)
            return ca.y < cb.y;
        if (ca.x != cb.x)
            return ca.x < cb.x;
        return a < b;
    });
    std::vector<std::size_t> position(n);
    for (std::size_t p = 0; p < n; ++p)
        position[order[p]] = p;

    RnnGraph g;
    g.n_inputs = genome.n_inputs;
    g.n_outputs = genome.n_outputs;
    g.output_node.assign(genome.n_outputs, RnnNode::npos);

    std::vector<std::vector<RnnEdge>> incoming(n);
    std::size_t param = 0;
    for (const auto& e : genome.ff_edges) {
        if (e.src >= n || e.dst >= n)
            throw internal_error("feed-forward edge references a missing node");
        const auto s = position[e.src];
        const auto d = position[e.dst];
        if (s >= d)
            throw internal_error(fmt::format("feed-forward edge {}->{} breaks topological order", e.src, e.dst));
        incoming[d].push_back({s, d, param++, 0});
    }
    for (const auto& e : genome.rec_edges) {
        if (e.src >= n || e.dst >= n || e.time_skip < 1)
            throw internal_error("malformed recurrent edge");
        incoming[position[e.dst]].push_back({position[e.src], position[e.dst], param++, e.time_skip});
    }

    g.nodes.resize(n);
    for (std::size_t p = 0; p < n; ++p) {
        const auto& src = genome.nodes[order[p]];
        auto& node = g.nodes[p];
        node.kind = src.kind;
        node.io_index = src.io_index;
        if (src.kind == NodeKind::hidden)
            node.bias = param++;
        if (src.kind == NodeKind::input && src.io_index >= genome.n_inputs)
            throw internal_error("input node index out of range");
        if (src.kind == NodeKind::output) {
            if (src.io_index >= genome.n_outputs)
                throw internal_error("output node index out of range");
            g.output_node[src.io_index] = p;
        }
    }
    g.n_params = param;

    g.edge_begin.push_back(0);
    for (auto& list : incoming) {
        g.edges.insert(g.edges.end(), list.begin(), list.end());
        g.edge_begin.push_back(g.edges.size());
    }
    return g;
}

std::vector<double> initial_weights(const RnnGraph& graph, double scale, Rng& rng)
{
    std::vector<double> w(graph.n_params, 0.0);
    for (const auto& e : graph.edges)
        w[e.weight] = rng.uniform(-scale, scale);
    return w;
}

namespace {

void check_shapes(const RnnGraph& graph, std::span<const double> weights, const Matrix& series)
{
    if (weights.size() != graph.n_params)
        throw domain_error(fmt::format("expected {} parameters, got {}", graph.n_params, weights.size()));
    if (series.cols() != graph.n_inputs)
        throw domain_error(fmt::format("series has {} columns, network expects {}", series.cols(), graph.n_inputs));
    if (series.rows() == 0)
        throw domain_error("series is empty");
}

/// Node activations for every step (rows = steps, cols = topological position).
Matrix activations(const RnnGraph& graph, std::span<const double> w, const Matrix& series)
{
    const std::size_t steps = series.rows();
    const std::size_t n = graph.nodes.size();
    Matrix v(steps, n);
    for (std::size_t t = 0; t < steps; ++t) {
        for (std::size_t k = 0; k < n; ++k) {
            const auto& node = graph.nodes[k];
            if (node.kind == NodeKind::input) {
                v(t, k) = series(t, node.io_index);
                continue;
            }
            double a = node.bias == RnnNode::npos ? 0.0 : w[node.bias];
            for (std::size_t i = graph.edge_begin[k]; i < graph.edge_begin[k + 1]; ++i) {
                const auto& e = graph.edges[i];
                if (e.time_skip > t)
                    continue;
                a += w[e.weight] * v(t - e.time_skip, e.src);
            }
            v(t, k) = node.kind == NodeKind::hidden ? std::tanh(a) : a;
        }
    }
    return v;
}

Matrix outputs_of(const RnnGraph& graph, const Matrix& v)
{
    Matrix out(v.rows(), graph.n_outputs);
    for (std::size_t t = 0; t < v.rows(); ++t)
        for (std::size_t o = 0; o < graph.n_outputs; ++o)
            if (graph.output_node[o] != RnnNode::npos)
                out(t, o) = v(t, graph.output_node[o]);
    return out;
}

bool all_finite(std::span<const double> xs)
{
    return std::all_of(xs.begin(), xs.end(), [](double x) { return std::isfinite(x); });
}

} // namespace

Matrix forward(const RnnGraph& graph, std::span<const double> weights, const Matrix& series)
{
    check_shapes(graph, weights, series);
    return outputs_of(graph, activations(graph, weights, series));
}

double mse(const Matrix& predictions, const Matrix& targets)
{
    if (predictions.rows() != targets.rows() || predictions.cols() != targets.cols())
        throw domain_error(fmt::format("shape mismatch: {}x{} predictions vs {}x{} targets", predictions.rows(),
                                       predictions.cols(), targets.rows(), targets.cols()));
    if (predictions.empty())
        throw domain_error("mse of empty input");
    const auto p = predictions.values();
    const auto y = targets.values();
    double sum = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double d = p[i] - y[i];
        sum += d * d;
    }
    return sum / static_cast<double>(p.size());
}

LossGradient loss_and_gradient(const RnnGraph& graph, std::span<const double> w, const Matrix& series,
                               const Matrix& targets)
{
    check_shapes(graph, w, series);
    if (targets.rows() != series.rows() || targets.cols() != graph.n_outputs)
        throw domain_error("targets do not align with the series");

    const Matrix v = activations(graph, w, series);
    const std::size_t steps = series.rows();
    const std::size_t n = graph.nodes.size();
    const double scale = 2.0 / static_cast<double>(steps * graph.n_outputs);

    LossGradient out;
    out.gradient.assign(graph.n_params, 0.0);
    Matrix dv(steps, n);
    double sum = 0.0;
    for (std::size_t t = 0; t < steps; ++t)
        for (std::size_t o = 0; o < graph.n_outputs; ++o) {
            const auto k = graph.output_node[o];
            const double pred = k == RnnNode::npos ? 0.0 : v(t, k);
            const double err = pred - targets(t, o);
            sum += err * err;
            if (k != RnnNode::npos)
                dv(t, k) += scale * err;
        }
    out.loss = sum / static_cast<double>(steps * graph.n_outputs);

    for (std::size_t t = steps; t-- > 0;) {
        for (std::size_t k = n; k-- > 0;) {
            const auto& node = graph.nodes[k];
            if (node.kind == NodeKind::input)
                continue;
            double da = dv(t, k);
            if (node.kind == NodeKind::hidden)
                da *= 1.0 - v(t, k) * v(t, k);
            if (da == 0.0)
                continue;
            if (node.bias != RnnNode::npos)
                out.gradient[node.bias] += da;
            for (std::size_t i = graph.edge_begin[k]; i < graph.edge_begin[k + 1]; ++i) {
                const auto& e = graph.edges[i];
                if (e.time_skip > t)
                    continue;
                const auto ts = t - e.time_skip;
                out.gradient[e.weight] += da * v(ts, e.src);
                dv(ts, e.src) += da * w[e.weight];
            }
        }
    }
    return out;
}

TrainResult train_from(const RnnGraph& graph, std::vector<double> weights, const Matrix& series,
                       const Matrix& targets, const TrainConfig& cfg)
{
    cfg.validate();
    const std::size_t rows = series.rows();
    const auto n_val = static_cast<std::size_t>(std::llround(static_cast<double>(rows) * cfg.validation_fraction));
    if (rows < 5 || n_val < 1 || n_val >= rows)
        throw domain_error(fmt::format("cannot hold out a validation tail from {} rows", rows));
    if (targets.rows() != rows)
        throw domain_error("series and targets are not aligned");
    const std::size_t n_train = rows - n_val;
    const Matrix train_x = series.slice_rows(0, n_train);
    const Matrix train_y = targets.slice_rows(0, n_train);
    const Matrix val_x = series.slice_rows(n_train, n_val);
    const Matrix val_y = targets.slice_rows(n_train, n_val);

    TrainResult result;
    result.initial_train_mse = mse(forward(graph, weights, train_x), train_y);

    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        auto lg = loss_and_gradient(graph, weights, train_x, train_y);
        if (!std::isfinite(lg.loss) || !all_finite(lg.gradient)) {
            result.weights = std::move(weights);
            return result;
        }
        double norm2 = 0.0;
        for (double g : lg.gradient)
            norm2 += g * g;
        const double norm = std::sqrt(norm2);
        const double factor = norm > cfg.gradient_clip ? cfg.gradient_clip / norm : 1.0;
        for (std::size_t i = 0; i < weights.size(); ++i)
            weights[i] -= cfg.learning_rate * factor * lg.gradient[i];
    }

    result.final_train_mse = mse(forward(graph, weights, train_x), train_y);
    const double val = mse(forward(graph, weights, val_x), val_y);
    result.weights = std::move(weights);
    if (std::isfinite(val) && std::isfinite(result.final_train_mse))
        result.validation_mse = val;
    return result;
}

TrainResult train_bptt(const RnnGraph& graph, const Matrix& series, const Matrix& targets, const TrainConfig& cfg,
                       Rng& rng)
{
    return train_from(graph, initial_weights(graph, cfg.weight_init_scale, rng), series, targets, cfg);
}

double grad_check(const RnnGraph& graph, std::span<const double> weights, const Matrix& series,
                  const Matrix& targets, double epsilon)
{
    if (graph.n_params == 0)
        return 0.0;
    const auto analytic = loss_and_gradient(graph, weights, series, targets).gradient;
    std::vector<double> w(weights.begin(), weights.end());
    double worst = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double saved = w[i];
        w[i] = saved + epsilon;
        const double up = mse(forward(graph, w, series), targets);
        w[i] = saved - epsilon;
        const double down = mse(forward(graph, w, series), targets);
        w[i] = saved;
        const double numeric = (up - down) / (2.0 * epsilon);
        const double denom = std::max({std::abs(analytic[i]), std::abs(numeric), 1e-8});
        worst = std::max(worst, std::abs(analytic[i] - numeric) / denom);
    }
    return worst;
}

nlohmann::json model_to_json(const Genome& genome, std::span<const double> weights)
{
    return {{"genome", genome_to_json(genome)}, {"weights", std::vector<double>(weights.begin(), weights.end())}};
}

} // namespace cants
