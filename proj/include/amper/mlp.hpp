#pragma once

#include <cstddef>
#include <random>
#include <vector>

namespace amper {

// Small fully-connected ReLU network with double parameters, used as the
// Q-network. Layer widths are fixed at construction.
class Mlp {
public:
    struct Layer {
        std::size_t in, out;
        std::vector<double> w;  // out x in, row-major
        std::vector<double> b;  // out
    };

    Mlp(const std::vector<std::size_t>& widths, std::mt19937_64& rng);

    std::size_t input_size() const { return layers_.front().in; }
    std::size_t output_size() const { return layers_.back().out; }
    std::size_t parameter_count() const;

    // single-input forward
    std::vector<double> forward(const std::vector<double>& x) const;

    struct BatchCache {
        std::size_t batch = 0;
        // activations[l] holds layer l's input batch (pre-layer), row-major
        std::vector<std::vector<double>> activations;
        std::vector<double> output;  // batch x out
    };

    BatchCache forward_batch(const std::vector<double>& x, std::size_t batch) const;

    struct Gradients {
        std::vector<Layer> layers;  // same shapes as the network, gradient values
    };

    // Backprop of loss 0.5 * sum_j delta_j^2 where delta is given per output
    // unit per sample (zero for non-taken actions).
    Gradients backward(const BatchCache& cache,
                       const std::vector<double>& output_delta) const;

    Gradients zero_gradients() const;

    // flat parameter access for optimizers and finite-difference checks
    std::vector<double> flatten() const;
    void unflatten(const std::vector<double>& flat);
    static std::vector<double> flatten_gradients(const Gradients& g);

    const std::vector<Layer>& layers() const { return layers_; }

private:
    std::vector<Layer> layers_;
};

// Adaptive-moment gradient descent on the flat parameter vector.
class AdamOptimizer {
public:
    AdamOptimizer(std::size_t n_params, double lr = 1e-3, double beta1 = 0.9,
                  double beta2 = 0.999, double eps = 1e-8)
        : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps), m_(n_params, 0.0),
          v_(n_params, 0.0) {}

    void step(std::vector<double>& params, const std::vector<double>& grads);

private:
    double lr_, beta1_, beta2_, eps_;
    long t_ = 0;
    std::vector<double> m_, v_;
};

}  // namespace amper
