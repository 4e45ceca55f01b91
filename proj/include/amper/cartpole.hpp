#pragma once

#include <array>
#include <cmath>
#include <random>

namespace amper {

// Classic cart-pole balancing task, Euler-integrated.
// Episode ends when |x| > 2.4, |theta| > 12 degrees, or after 200 steps.
class CartPole {
public:
    using State = std::array<double, 4>;  // x, x_dot, theta, theta_dot

    static constexpr double kGravity = 9.8;
    static constexpr double kMassCart = 1.0;
    static constexpr double kMassPole = 0.1;
    static constexpr double kHalfLength = 0.5;
    static constexpr double kForceMag = 10.0;
    static constexpr double kDt = 0.02;
    static constexpr double kThetaThreshold = 12.0 * 2.0 * M_PI / 360.0;
    static constexpr double kXThreshold = 2.4;
    static constexpr int kMaxSteps = 200;
    static constexpr int kActions = 2;

    template <class Rng>
    State reset(Rng& rng) {
        std::uniform_real_distribution<double> u(-0.05, 0.05);
        state_ = {u(rng), u(rng), u(rng), u(rng)};
        steps_ = 0;
        return state_;
    }

    struct StepResult {
        State next;
        double reward;
        bool done;
        bool truncated;  // hit the step cap, not a failure state
    };

    // action 0 pushes left, 1 pushes right; +1 reward per step
    StepResult step(int action) {
        const double total_mass = kMassCart + kMassPole;
        const double pole_mass_length = kMassPole * kHalfLength;

        double x = state_[0], x_dot = state_[1], theta = state_[2], theta_dot = state_[3];
        double force = action == 1 ? kForceMag : -kForceMag;
        double cos_t = std::cos(theta), sin_t = std::sin(theta);

        double temp = (force + pole_mass_length * theta_dot * theta_dot * sin_t) / total_mass;
        double theta_acc = (kGravity * sin_t - cos_t * temp) /
                           (kHalfLength * (4.0 / 3.0 - kMassPole * cos_t * cos_t / total_mass));
        double x_acc = temp - pole_mass_length * theta_acc * cos_t / total_mass;

        x += kDt * x_dot;
        x_dot += kDt * x_acc;
        theta += kDt * theta_dot;
        theta_dot += kDt * theta_acc;
        state_ = {x, x_dot, theta, theta_dot};
        ++steps_;

        bool failed = std::fabs(x) > kXThreshold || std::fabs(theta) > kThetaThreshold;
        bool truncated = !failed && steps_ >= kMaxSteps;
        return {state_, 1.0, failed || truncated, truncated};
    }

    const State& state() const { return state_; }
    int steps() const { return steps_; }

private:
    State state_{};
    int steps_ = 0;
};

}  // namespace amper
