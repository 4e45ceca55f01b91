#include "amper/mlp.hpp"

#include <cmath>
#include <stdexcept>

namespace amper {

Mlp::Mlp(const std::vector<std::size_t>& widths, std::mt19937_64& rng) {
    if (widths.size() < 2) throw std::invalid_argument("need at least two layer widths");
    for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
        Layer layer;
        layer.in = widths[l];
        layer.out = widths[l + 1];
        layer.w.resize(layer.in * layer.out);
        layer.b.assign(layer.out, 0.0);
        // He initialization for the ReLU stack
        double stddev = std::sqrt(2.0 / static_cast<double>(layer.in));
        std::normal_distribution<double> n(0.0, stddev);
        for (double& w : layer.w) w = n(rng);
        layers_.push_back(std::move(layer));
    }
}

std::size_t Mlp::parameter_count() const {
    std::size_t n = 0;
    for (const auto& l : layers_) n += l.w.size() + l.b.size();
    return n;
}

std::vector<double> Mlp::forward(const std::vector<double>& x) const {
    BatchCache c = forward_batch(x, 1);
    return c.output;
}

Mlp::BatchCache Mlp::forward_batch(const std::vector<double>& x, std::size_t batch) const {
    if (x.size() != batch * input_size()) throw std::invalid_argument("bad input size");
    BatchCache cache;
    cache.batch = batch;
    cache.activations.reserve(layers_.size());
    std::vector<double> cur = x;
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        const Layer& layer = layers_[l];
        cache.activations.push_back(cur);
        std::vector<double> next(batch * layer.out);
        for (std::size_t s = 0; s < batch; ++s) {
            const double* in = cur.data() + s * layer.in;
            double* out = next.data() + s * layer.out;
            for (std::size_t o = 0; o < layer.out; ++o) {
                const double* wrow = layer.w.data() + o * layer.in;
                double acc = layer.b[o];
                for (std::size_t i = 0; i < layer.in; ++i) acc += wrow[i] * in[i];
                out[o] = acc;
            }
        }
        if (l + 1 < layers_.size()) {
            for (double& v : next) v = v > 0.0 ? v : 0.0;  // ReLU on hidden layers
        }
        cur = std::move(next);
    }
    cache.output = std::move(cur);
    return cache;
}

Mlp::Gradients Mlp::zero_gradients() const {
    Gradients g;
    for (const auto& l : layers_) {
        Layer zl;
        zl.in = l.in;
        zl.out = l.out;
        zl.w.assign(l.w.size(), 0.0);
        zl.b.assign(l.b.size(), 0.0);
        g.layers.push_back(std::move(zl));
    }
    return g;
}

Mlp::Gradients Mlp::backward(const BatchCache& cache,
                             const std::vector<double>& output_delta) const {
    if (output_delta.size() != cache.batch * output_size()) {
        throw std::invalid_argument("bad delta size");
    }
    Gradients grads = zero_gradients();
    // dL/d(output) for loss 0.5*sum delta^2 with delta = output - target is
    // delta itself; callers pass the per-unit delta directly.
    std::vector<double> upstream = output_delta;
    for (std::size_t li = layers_.size(); li-- > 0;) {
        const Layer& layer = layers_[li];
        Layer& g = grads.layers[li];
        const std::vector<double>& input = cache.activations[li];
        std::vector<double> downstream(cache.batch * layer.in, 0.0);
        for (std::size_t s = 0; s < cache.batch; ++s) {
            const double* in = input.data() + s * layer.in;
            const double* up = upstream.data() + s * layer.out;
            double* down = downstream.data() + s * layer.in;
            for (std::size_t o = 0; o < layer.out; ++o) {
                double u = up[o];
                if (u == 0.0) continue;
                g.b[o] += u;
                double* wg = g.w.data() + o * layer.in;
                const double* wrow = layer.w.data() + o * layer.in;
                for (std::size_t i = 0; i < layer.in; ++i) {
                    wg[i] += u * in[i];
                    down[i] += u * wrow[i];
                }
            }
        }
        if (li > 0) {
            // ReLU mask: the stored activation is post-ReLU for hidden layers
            for (std::size_t j = 0; j < downstream.size(); ++j) {
                if (input[j] <= 0.0) downstream[j] = 0.0;
            }
        }
        upstream = std::move(downstream);
    }
    return grads;
}

std::vector<double> Mlp::flatten() const {
    std::vector<double> flat;
    flat.reserve(parameter_count());
    for (const auto& l : layers_) {
        flat.insert(flat.end(), l.w.begin(), l.w.end());
        flat.insert(flat.end(), l.b.begin(), l.b.end());
    }
    return flat;
}

void Mlp::unflatten(const std::vector<double>& flat) {
    if (flat.size() != parameter_count()) throw std::invalid_argument("bad flat size");
    std::size_t pos = 0;
    for (auto& l : layers_) {
        for (double& w : l.w) w = flat[pos++];
        for (double& b : l.b) b = flat[pos++];
    }
}

std::vector<double> Mlp::flatten_gradients(const Gradients& g) {
    std::vector<double> flat;
    for (const auto& l : g.layers) {
        flat.insert(flat.end(), l.w.begin(), l.w.end());
        flat.insert(flat.end(), l.b.begin(), l.b.end());
    }
    return flat;
}

void AdamOptimizer::step(std::vector<double>& params, const std::vector<double>& grads) {
    if (params.size() != m_.size() || grads.size() != m_.size()) {
        throw std::invalid_argument("parameter/gradient size mismatch");
    }
    ++t_;
    double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
    double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
    for (std::size_t i = 0; i < params.size(); ++i) {
        m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * grads[i];
        v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * grads[i] * grads[i];
        params[i] -= lr_ * (m_[i] / bc1) / (std::sqrt(v_[i] / bc2) + eps_);
    }
}

}  // namespace amper
