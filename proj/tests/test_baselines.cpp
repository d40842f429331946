#include <doctest.h>

#include <cmath>

#include "solarcast/baselines.hpp"
#include "solarcast/rng.hpp"
#include "support/baseline_oracles.hpp"

using namespace solarcast;
namespace st = solarcast::testing;

namespace {

std::vector<std::vector<double>> random_grid(std::mt19937_64& rng,
                                             std::size_t days,
                                             std::size_t slots,
                                             double zero_fraction = 0.2) {
    std::vector<std::vector<double>> grid(days, std::vector<double>(slots));
    for (auto& row : grid)
        for (auto& v : row)
            v = uniform01(rng) < zero_fraction ? 0.0 : uniform(rng, 0, 1000);
    return grid;
}

}  // namespace

TEST_CASE("ewma_step degenerate alphas and midpoint") {
    EwmaState state;
    state.estimate = {100.0, 40.0};

    state.alpha = 1.0;
    auto next = ewma_step(state, std::vector<double>{200.0, 10.0});
    CHECK(next.estimate == state.estimate);

    state.alpha = 0.0;
    next = ewma_step(state, std::vector<double>{200.0, 10.0});
    CHECK(next.estimate == std::vector<double>{200.0, 10.0});

    state.alpha = 0.5;
    state.estimate = {100.0};
    next = ewma_step(state, std::vector<double>{200.0});
    CHECK(next.estimate[0] == 150.0);
}

TEST_CASE("ewma_step rejects mismatched lengths and bad alpha") {
    EwmaState state;
    state.estimate = {1.0, 2.0};
    state.alpha = 0.5;
    CHECK_THROWS_AS(ewma_step(state, std::vector<double>{1.0}), ShapeError);
    state.alpha = 1.5;
    CHECK_THROWS_AS(ewma_step(state, std::vector<double>{1.0, 2.0}), ConfigError);
}

TEST_CASE("ewma 30-day constant input converges and matches the loop oracle") {
    const double c = 640.0;
    const double alpha = 0.8;
    std::vector<std::vector<double>> harvested(30, std::vector<double>(4, c));
    const auto trajectory =
        st::ewma_trajectory_oracle(std::vector<double>(4, 0.0), harvested, alpha);

    EwmaState state;
    state.estimate.assign(4, 0.0);
    state.alpha = alpha;
    for (std::size_t day = 0; day < 30; ++day) {
        state = ewma_step(state, harvested[day]);
        for (std::size_t s = 0; s < 4; ++s)
            CHECK(std::abs(state.estimate[s] - trajectory[day + 1][s]) < 1e-12);
        if (day + 1 >= 21)
            for (double e : state.estimate) CHECK(std::abs(e - c) < 0.01 * c);
    }
}

TEST_CASE("ewma convexity and positive homogeneity") {
    std::mt19937_64 rng(71);
    for (int trial = 0; trial < 100; ++trial) {
        const double alpha = uniform01(rng);
        const double e = uniform(rng, 0, 1000);
        const double h = uniform(rng, 0, 1000);
        EwmaState state{{e}, alpha};
        const double next = ewma_step(state, std::vector<double>{h}).estimate[0];
        CHECK(next >= std::min(e, h));
        CHECK(next <= std::max(e, h));

        const double c = uniform(rng, 0.01, 10.0);
        EwmaState scaled{{c * e}, alpha};
        const double scaled_next =
            ewma_step(scaled, std::vector<double>{c * h}).estimate[0];
        CHECK(std::abs(scaled_next - c * next) <=
              1e-15 * std::max(1.0, std::abs(c * next)));
    }
}

TEST_CASE("gap_factor trivial values") {
    SUBCASE("today equal to the historical means gives 1") {
        std::vector<std::vector<double>> grid = {
            {100, 200, 300, 400}, {300, 100, 500, 200}, {200, 150, 400, 300}};
        // day 3 = per-slot mean of days 0..2
        grid.push_back({200, 150, 400, 300});
        const auto m = st::grid_to_matrix(grid);
        for (std::size_t k = 1; k <= 4; ++k)
            CHECK(std::abs(gap_factor(m, 3, 3, k) - 1.0) < 1e-12);
    }
    SUBCASE("k = 1 at half the historical mean gives 0.5") {
        const auto m = st::grid_to_matrix({{400, 400}, {200, 0}});
        CHECK(gap_factor(m, 1, 0, 1) == doctest::Approx(0.5));
    }
    SUBCASE("zero historical mean is neutral") {
        const auto m = st::grid_to_matrix({{0, 100}, {50, 100}});
        CHECK(gap_factor(m, 1, 0, 1) == doctest::Approx(1.0));
    }
    SUBCASE("insufficient history") {
        const auto m = st::grid_to_matrix({{1, 2, 3}, {1, 2, 3}});
        CHECK_THROWS_AS(gap_factor(m, 0, 2, 1), InsufficientHistoryError);
        CHECK_THROWS_AS(gap_factor(m, 1, 1, 3), InsufficientHistoryError);
    }
}

TEST_CASE("gap_factor matches the brute-force oracle on a 3x6 fixture") {
    std::mt19937_64 rng(73);
    const auto grid = random_grid(rng, 3, 6);
    const auto m = st::grid_to_matrix(grid);
    for (std::size_t day = 1; day < 3; ++day)
        for (std::size_t slot = 2; slot < 6; ++slot)
            CHECK(std::abs(gap_factor(m, day, slot, 3) -
                           st::gap_oracle(grid, day, slot, 3)) < 1e-12);
}

TEST_CASE("wcma trivial values") {
    SUBCASE("constant sky predicts the constant") {
        const double c = 321.0;
        const auto m =
            st::grid_to_matrix(std::vector<std::vector<double>>(4, {c, c, c, c, c}));
        for (double alpha : {0.0, 0.3, 1.0})
            for (std::size_t k : {std::size_t{1}, std::size_t{3}})
                CHECK(wcma_predict(m, 2, 2, alpha, k) == doctest::Approx(c));
    }
    SUBCASE("alpha = 1 returns the last observation") {
        std::mt19937_64 rng(79);
        const auto grid = random_grid(rng, 3, 5);
        const auto m = st::grid_to_matrix(grid);
        CHECK(wcma_predict(m, 2, 2, 1.0, 2) == grid[2][2]);
    }
    SUBCASE("alpha = 0 returns M * GAP") {
        std::mt19937_64 rng(83);
        const auto grid = random_grid(rng, 4, 5);
        const auto m = st::grid_to_matrix(grid);
        const double mean = st::slot_history_mean_oracle(grid, 2, 3);
        CHECK(wcma_predict(m, 2, 2, 0.0, 2) ==
              doctest::Approx(mean * st::gap_oracle(grid, 2, 2, 2)));
    }
    SUBCASE("slot range error when no successor exists") {
        const auto m = st::grid_to_matrix({{1, 2}, {3, 4}});
        CHECK_THROWS_AS(wcma_predict(m, 1, 1, 0.5, 1), ShapeError);
    }
}

TEST_CASE("wcma and gap match brute force on 100 random matrices") {
    std::mt19937_64 rng(2025);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t days = 2 + bounded(rng, 5);    // <= 6
        const std::size_t slots = 3 + bounded(rng, 10);  // <= 12
        const auto grid = random_grid(rng, days, slots);
        const auto m = st::grid_to_matrix(grid);
        const std::size_t k = 1 + bounded(rng, std::min<std::size_t>(4, slots - 1));
        const double alpha = uniform01(rng);
        for (std::size_t day = 1; day < days; ++day) {
            for (std::size_t slot = k - 1; slot + 1 < slots; ++slot) {
                CHECK(std::abs(gap_factor(m, day, slot, k) -
                               st::gap_oracle(grid, day, slot, k)) < 1e-12);
                CHECK(std::abs(wcma_predict(m, day, slot, alpha, k) -
                               st::wcma_oracle(grid, day, slot, alpha, k)) < 1e-12);
            }
        }
    }
}

TEST_CASE("build_slot_matrix") {
    SUBCASE("60-minute slots make 24 per day") {
        WeatherRecord r;
        r.timestamp = 1472688000;
        const auto m = build_slot_matrix({r}, 60);
        CHECK(m.slots == 24);
        CHECK(m.days == 1);
    }
    SUBCASE("one reading per slot is kept verbatim") {
        std::vector<WeatherRecord> records;
        for (int h = 0; h < 24; ++h) {
            WeatherRecord r;
            r.timestamp = 1472688000 + h * 3600;
            r.radiation = 10.0 * h;
            records.push_back(r);
        }
        const auto m = build_slot_matrix(records, 60);
        for (std::size_t s = 0; s < 24; ++s) {
            CHECK(m.at(0, s) == 10.0 * static_cast<double>(s));
            CHECK(m.was_observed(0, s));
        }
    }
    SUBCASE("two readings in a slot average") {
        WeatherRecord a, b;
        a.timestamp = 1472688000;
        a.radiation = 100;
        b.timestamp = 1472688000 + 600;
        b.radiation = 300;
        const auto m = build_slot_matrix({a, b}, 60);
        CHECK(m.at(0, 0) == 200.0);
    }
    SUBCASE("empty slots carry the previous value and are flagged") {
        WeatherRecord a, b;
        a.timestamp = 1472688000;  // slot 0
        a.radiation = 50;
        b.timestamp = 1472688000 + 3 * 3600;  // slot 3
        b.radiation = 80;
        const auto m = build_slot_matrix({a, b}, 60);
        CHECK(m.at(0, 1) == 50.0);
        CHECK(m.at(0, 2) == 50.0);
        CHECK_FALSE(m.was_observed(0, 1));
        CHECK(m.was_observed(0, 3));
    }
    SUBCASE("slot duration must divide the day") {
        CHECK_THROWS_AS(build_slot_matrix({WeatherRecord{}}, 37), ConfigError);
        CHECK_THROWS_AS(build_slot_matrix({WeatherRecord{}}, 90), ConfigError);
    }
}
