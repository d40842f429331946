#include <doctest.h>

#include <cmath>

#include "solarcast/optim.hpp"
#include "solarcast/rng.hpp"

using namespace solarcast;

namespace {

// One scalar parameter wrapped in the tree shape adam_step expects.
struct ScalarSetup {
    NetworkParams params;
    Gradients grads;
    AdamState state;
};

ScalarSetup scalar_setup(double w, double g) {
    ScalarSetup s;
    LayerParams layer;
    layer.units = 1;
    layer.fan_in = 1;
    layer.weights = {w};
    layer.biases = {0.0};
    s.params.layers.push_back(layer);
    s.grads = zeros_like(s.params);
    s.grads.layers[0].weights[0] = g;
    s.state = AdamState::fresh(s.params);
    return s;
}

}  // namespace

TEST_CASE("decayed_lr") {
    AdamHyper h;
    CHECK(decayed_lr(h, 0) == h.alpha0);
    CHECK(decayed_lr(h, 100) == 0.0005);  // 0.001 / (1 + 0.01 * 100)

    AdamHyper flat = h;
    flat.decay = 0.0;
    CHECK(decayed_lr(flat, 12345) == flat.alpha0);
}

TEST_CASE("decayed_lr is nonincreasing over epochs") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        AdamHyper h;
        h.alpha0 = uniform(rng, 1e-5, 0.1);
        h.decay = uniform(rng, 0.0, 0.5);
        double prev = decayed_lr(h, 0);
        for (std::uint64_t epoch = 1; epoch <= 10000; ++epoch) {
            const double lr = decayed_lr(h, epoch);
            CHECK(lr <= prev);
            prev = lr;
        }
    }
}

TEST_CASE("zero gradient leaves parameters unchanged") {
    auto s = scalar_setup(1.0, 0.0);
    adam_step(s.params, s.grads, s.state, AdamHyper{}, 0.001);
    CHECK(s.params.layers[0].weights[0] == 1.0);
    CHECK(s.state.t == 1);
}

TEST_CASE("closed-form first step") {
    auto s = scalar_setup(1.0, 1.0);
    const AdamHyper h;
    adam_step(s.params, s.grads, s.state, h, 0.001);
    CHECK(std::abs(s.state.m.layers[0].weights[0] - 0.1) <= 1e-15);
    CHECK(std::abs(s.state.v.layers[0].weights[0] - 0.001) <= 1e-15);
    // mhat = 1, vhat = 1, w' = 1 - 0.001 / (1 + 1e-8)
    const double expected = 1.0 - 0.001 * 1.0 / (std::sqrt(1.0) + h.epsilon);
    CHECK(std::abs(s.params.layers[0].weights[0] - expected) <= 1e-15);
    CHECK(s.params.layers[0].weights[0] == doctest::Approx(0.999).epsilon(1e-7));
}

TEST_CASE("two steps with constant gradient match a hand recurrence") {
    auto s = scalar_setup(1.0, 1.0);
    const AdamHyper h;
    const double lr = 0.001;
    adam_step(s.params, s.grads, s.state, h, lr);
    adam_step(s.params, s.grads, s.state, h, lr);

    // independent scalar recurrence
    double w = 1.0, m = 0.0, v = 0.0;
    for (int t = 1; t <= 2; ++t) {
        m = h.beta1 * m + (1 - h.beta1) * 1.0;
        v = h.beta2 * v + (1 - h.beta2) * 1.0;
        const double mhat = m / (1 - std::pow(h.beta1, t));
        const double vhat = v / (1 - std::pow(h.beta2, t));
        w -= lr * mhat / (std::sqrt(vhat) + h.epsilon);
    }
    CHECK(std::abs(s.params.layers[0].weights[0] - w) <= 1e-15);
    CHECK(s.state.t == 2);
}

TEST_CASE("first-step magnitude is bounded by lr") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 100; ++trial) {
        const double g = uniform(rng, -100, 100);
        if (g == 0) continue;
        auto s = scalar_setup(uniform(rng, -5, 5), g);
        const double before = s.params.layers[0].weights[0];
        const double lr = uniform(rng, 1e-5, 0.1);
        adam_step(s.params, s.grads, s.state, AdamHyper{}, lr);
        CHECK(std::abs(s.params.layers[0].weights[0] - before) <=
              lr * (1.0 + 1e-6));
    }
}

TEST_CASE("first-step update is gradient-scale invariant") {
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 50; ++trial) {
        const double g = uniform(rng, 0.1, 10.0);
        const double c = uniform(rng, 0.01, 100.0);
        auto a = scalar_setup(1.0, g);
        auto b = scalar_setup(1.0, c * g);
        adam_step(a.params, a.grads, a.state, AdamHyper{}, 0.001);
        adam_step(b.params, b.grads, b.state, AdamHyper{}, 0.001);
        CHECK(std::abs(a.params.layers[0].weights[0] -
                       b.params.layers[0].weights[0]) < 1e-6);
    }
}

TEST_CASE("second moments stay nonnegative") {
    std::mt19937_64 rng(47);
    auto s = scalar_setup(0.0, 0.0);
    for (int step = 0; step < 200; ++step) {
        s.grads.layers[0].weights[0] = uniform(rng, -10, 10);
        adam_step(s.params, s.grads, s.state, AdamHyper{}, 0.01);
        CHECK(s.state.v.layers[0].weights[0] >= 0.0);
    }
}

TEST_CASE("non-finite gradient aborts") {
    auto s = scalar_setup(1.0, std::nan(""));
    CHECK_THROWS_AS(adam_step(s.params, s.grads, s.state, AdamHyper{}, 0.001),
                    NumericError);
}

TEST_CASE("shape mismatch is rejected") {
    auto s = scalar_setup(1.0, 1.0);
    Gradients wrong = s.grads;
    wrong.layers.clear();
    CHECK_THROWS_AS(adam_step(s.params, wrong, s.state, AdamHyper{}, 0.001),
                    ShapeError);
}
