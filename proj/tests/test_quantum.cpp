#include <catch_amalgamated.hpp>

#include <cmath>
#include <cstdint>

#include "oracles.hpp"
#include "wbell/quantum.hpp"

using Catch::Approx;
using namespace wbell;

namespace {

MeasurementSetting setting_from_mask(std::uint64_t x_mask, std::size_t n) {
    MeasurementSetting s = MeasurementSetting::all_z(n);
    for (std::size_t i = 0; i < n; ++i) {
        if ((x_mask >> i) & 1u) s.bases[i] = Basis::X;
    }
    return s;
}

}  // namespace

TEST_CASE("build_w_state") {
    SECTION("n=1 puts the photon in the single mode") {
        const PureState w = build_w_state(1);
        REQUIRE(w.amplitude(0b1).real() == Approx(1.0));
        REQUIRE(std::abs(w.amplitude(0b0)) == 0.0);
    }
    SECTION("n=3 is the uniform one-hot superposition") {
        const PureState w = build_w_state(3);
        const double a = 1.0 / std::sqrt(3.0);
        for (std::uint64_t b = 0; b < 8; ++b) {
            const double expected = std::has_single_bit(b) ? a : 0.0;
            REQUIRE(w.amplitude(b).real() == Approx(expected).margin(1e-15));
            REQUIRE(w.amplitude(b).imag() == 0.0);
        }
    }
    SECTION("normalization") {
        for (std::size_t n : {2u, 5u, 11u}) {
            REQUIRE(build_w_state(n).squared_norm() ==
                    Approx(1.0).margin(1e-12));
        }
    }
    SECTION("invalid mode counts") {
        REQUIRE_THROWS_AS(build_w_state(0), std::invalid_argument);
        REQUIRE_THROWS_AS(build_w_state(kMaxStatevectorModes + 1),
                          std::invalid_argument);
    }
}

TEST_CASE("build_vacuum") {
    const PureState vac = build_vacuum(3);
    REQUIRE(vac.amplitude(0b000).real() == Approx(1.0));
    REQUIRE(vac.squared_norm() == Approx(1.0).margin(1e-15));
    REQUIRE_THROWS_AS(build_vacuum(0), std::invalid_argument);

    // all modes empty: the all-plus Z outcome is certain
    REQUIRE(outcome_probability(build_vacuum(4), MeasurementSetting::all_z(4),
                                OutcomeAssignment::all_plus(4)) ==
            Approx(1.0).margin(1e-15));
}

TEST_CASE("outcome_probability reproduces the three-site predictions") {
    const PureState w = build_w_state(3);

    REQUIRE(outcome_probability(w, MeasurementSetting::all_z(3),
                                OutcomeAssignment::from_string("++-")) ==
            Approx(1.0 / 3.0).margin(1e-12));
    REQUIRE(outcome_probability(w, MeasurementSetting::all_x(3),
                                OutcomeAssignment::from_string("+++")) ==
            Approx(3.0 / 8.0).margin(1e-12));
    REQUIRE(outcome_probability(w, MeasurementSetting::from_string("ZXX"),
                                OutcomeAssignment::from_string("++-")) ==
            0.0);
}

TEST_CASE("four-site all-X uniform outcome") {
    const PureState w = build_w_state(4);
    const MeasurementSetting all_x = MeasurementSetting::all_x(4);
    const OutcomeAssignment all_plus = OutcomeAssignment::all_plus(4);

    // frozen from the projector-vector oracle
    REQUIRE(oracles::brute_force_outcome_probability(w, all_x, all_plus) ==
            Approx(0.25).margin(1e-12));
    REQUIRE(outcome_probability(w, all_x, all_plus) ==
            Approx(0.25).margin(1e-12));
}

TEST_CASE("outcome_probability validates lengths") {
    const PureState w = build_w_state(3);
    REQUIRE_THROWS_AS(
        outcome_probability(w, MeasurementSetting::all_z(4),
                            OutcomeAssignment::all_plus(4)),
        DimensionMismatchError);
    REQUIRE_THROWS_AS(
        outcome_probability(w, MeasurementSetting::all_z(3),
                            OutcomeAssignment::all_plus(2)),
        DimensionMismatchError);
}

TEST_CASE("probabilities over a setting sum to one") {
    for (std::uint64_t seed : {11u, 22u}) {
        for (std::size_t n : {1u, 3u, 6u}) {
            const PureState psi = oracles::random_state(n, seed);
            for (std::uint64_t x_mask = 0; x_mask < (std::uint64_t{1} << n);
                 ++x_mask) {
                const MeasurementSetting s = setting_from_mask(x_mask, n);
                double total = 0.0;
                for (std::uint64_t o = 0; o < (std::uint64_t{1} << n); ++o) {
                    const double p = outcome_probability(
                        psi, s, OutcomeAssignment::from_mask(o, n));
                    REQUIRE(p >= 0.0);
                    REQUIRE(p <= 1.0 + 1e-12);
                    total += p;
                }
                REQUIRE(total == Approx(1.0).margin(1e-12));
            }
        }
    }
}

TEST_CASE("outcome_probability matches the projector-vector oracle") {
    for (std::size_t n : {2u, 4u, 7u}) {
        const PureState psi = oracles::random_state(n, 1000 + n);
        rng::Engine engine = rng::make_engine(77, n);
        for (int trial = 0; trial < 200; ++trial) {
            const std::uint64_t x_mask =
                rng::uniform_below(engine, std::uint64_t{1} << n);
            const std::uint64_t o_mask =
                rng::uniform_below(engine, std::uint64_t{1} << n);
            const MeasurementSetting s = setting_from_mask(x_mask, n);
            const OutcomeAssignment o = OutcomeAssignment::from_mask(o_mask, n);
            REQUIRE(outcome_probability(psi, s, o) ==
                    Approx(oracles::brute_force_outcome_probability(psi, s, o))
                        .margin(1e-12));
        }
    }
}

TEST_CASE("outcome_distribution agrees with per-outcome probabilities") {
    for (std::size_t n : {1u, 3u, 5u}) {
        const PureState psi = oracles::random_state(n, 5 * n + 1);
        for (std::uint64_t x_mask : {std::uint64_t{0},
                                     (std::uint64_t{1} << n) - 1,
                                     std::uint64_t{0b101} &
                                         ((std::uint64_t{1} << n) - 1)}) {
            const MeasurementSetting s = setting_from_mask(x_mask, n);
            const std::vector<double> dist = outcome_distribution(psi, s);
            double total = 0.0;
            for (std::uint64_t mask = 0; mask < dist.size(); ++mask) {
                REQUIRE(dist[mask] ==
                        Approx(outcome_probability(
                                   psi, s, OutcomeAssignment::from_mask(mask, n)))
                            .margin(1e-12));
                total += dist[mask];
            }
            REQUIRE(total == Approx(1.0).margin(1e-12));
        }
    }
}

TEST_CASE("single-photon support under the all-Z setting") {
    for (std::size_t n : {3u, 5u, 8u}) {
        const PureState w = build_w_state(n);
        const MeasurementSetting all_z = MeasurementSetting::all_z(n);
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
            const double p = outcome_probability(
                w, all_z, OutcomeAssignment::from_mask(mask, n));
            if (std::popcount(mask) == 1) {
                REQUIRE(p == Approx(1.0 / static_cast<double>(n)).margin(1e-12));
            } else {
                REQUIRE(p == 0.0);
            }
        }
    }
}

TEST_CASE("analytic W probabilities") {
    SECTION("three-site values") {
        REQUIRE(analytic_w_probability(3, MeasurementSetting::all_z(3),
                                       OutcomeAssignment::from_string("+-+")) ==
                Approx(1.0 / 3.0).margin(1e-15));
        REQUIRE(analytic_w_probability(3, MeasurementSetting::all_x(3),
                                       OutcomeAssignment::from_string("+++")) ==
                Approx(3.0 / 8.0).margin(1e-15));
    }
    SECTION("two-site anti-correlated X outcome vanishes") {
        REQUIRE(analytic_w_probability(2, MeasurementSetting::all_x(2),
                                       OutcomeAssignment::from_string("+-")) ==
                0.0);
    }
    SECTION("twenty sites, all X, uniform outcome") {
        // exact closed form: 20 / 2^20
        REQUIRE(analytic_w_probability(20, MeasurementSetting::all_x(20),
                                       OutcomeAssignment::all_plus(20)) ==
                Approx(20.0 / 1048576.0).margin(1e-18));
    }
    SECTION("dimension checks") {
        REQUIRE_THROWS_AS(
            analytic_w_probability(3, MeasurementSetting::all_z(2),
                                   OutcomeAssignment::all_plus(3)),
            DimensionMismatchError);
    }
}

TEST_CASE("analytic path equals the statevector path") {
    SECTION("exhaustive for small n") {
        for (std::size_t n = 1; n <= 6; ++n) {
            const PureState w = build_w_state(n);
            for (std::uint64_t x_mask = 0; x_mask < (std::uint64_t{1} << n);
                 ++x_mask) {
                const MeasurementSetting s = setting_from_mask(x_mask, n);
                for (std::uint64_t o = 0; o < (std::uint64_t{1} << n); ++o) {
                    const OutcomeAssignment outcome =
                        OutcomeAssignment::from_mask(o, n);
                    REQUIRE(analytic_w_probability(n, s, outcome) ==
                            Approx(outcome_probability(w, s, outcome))
                                .margin(1e-10));
                }
            }
        }
    }
    SECTION("randomized for larger n") {
        for (std::size_t n = 7; n <= 12; ++n) {
            const PureState w = build_w_state(n);
            rng::Engine engine = rng::make_engine(4242, n);
            for (int trial = 0; trial < 1000; ++trial) {
                const std::uint64_t x_mask =
                    rng::uniform_below(engine, std::uint64_t{1} << n);
                const std::uint64_t o_mask =
                    rng::uniform_below(engine, std::uint64_t{1} << n);
                const MeasurementSetting s = setting_from_mask(x_mask, n);
                const OutcomeAssignment o =
                    OutcomeAssignment::from_mask(o_mask, n);
                REQUIRE(analytic_w_probability(n, s, o) ==
                        Approx(outcome_probability(w, s, o)).margin(1e-10));
            }
        }
    }
}

TEST_CASE("PureState construction guards") {
    REQUIRE_THROWS_AS(PureState(2, std::vector<Complex>(3, Complex{0.5, 0})),
                      DimensionMismatchError);
    REQUIRE_THROWS_AS(PureState(1, {Complex{0.9, 0}, Complex{0, 0}}),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(
        PureState::normalized(1, {Complex{0, 0}, Complex{0, 0}}),
        std::invalid_argument);

    const PureState s = PureState::normalized(1, {Complex{3, 0}, Complex{4, 0}});
    REQUIRE(s.amplitude(0).real() == Approx(0.6));
    REQUIRE(s.amplitude(1).real() == Approx(0.8));
}
