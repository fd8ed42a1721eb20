#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "singlet/errors.hpp"
#include "singlet/preselect.hpp"

using namespace singlet;
using Catch::Approx;

TEST_CASE("corner filter on small sectors") {
    SECTION("tightest threshold keeps only the extremal component") {
        const SectorState filtered = apply_filter(sector_state(1, Flavor::Phi), FilterSpec::corner(0));
        REQUIRE(filtered.amplitudes[0] == Approx(1.0).margin(1e-14));  // |3, 0_perp>
        REQUIRE(filtered.amplitudes[2] == 0.0);
        REQUIRE(filtered.norm_sq == Approx(6.0 / 8.0).margin(1e-13));
        REQUIRE(filtered_norm(1, Flavor::Phi, FilterSpec::corner(0)) == Approx(6.0).epsilon(1e-12));
    }
    SECTION("threshold at the sector size disables filtering") {
        for (int k : {0, 1, 3}) {
            const SectorState raw = sector_state(k, Flavor::Phi);
            const SectorState same = apply_filter(raw, FilterSpec::corner(2 * k + 2));
            REQUIRE((same.amplitudes - raw.amplitudes).norm() == 0.0);
            REQUIRE(same.norm_sq == 1.0);
        }
    }
    SECTION("five-photon sector with threshold two") {
        const SectorState filtered = apply_filter(sector_state(2, Flavor::Phi), FilterSpec::corner(2));
        REQUIRE(filtered.amplitudes[0] != 0.0);  // |5, 0_perp>
        REQUIRE(filtered.amplitudes[4] != 0.0);  // |1, 4_perp>
        REQUIRE(filtered.amplitudes[2] == 0.0);  // |3, 2_perp> removed
    }
}

TEST_CASE("filters are idempotent projections") {
    for (const FilterSpec& filter :
         {FilterSpec::corner(0), FilterSpec::corner(2), FilterSpec::mdf(2), FilterSpec::mdf(4)}) {
        for (int k : {1, 2, 4, 9}) {
            const SectorState once = apply_filter(sector_state(k, Flavor::PhiBar), filter);
            const SectorState twice = apply_filter(once, filter);
            REQUIRE((twice.amplitudes - once.amplitudes).norm() == 0.0);
            REQUIRE(twice.norm_sq == Approx(once.norm_sq).margin(1e-15));
        }
    }
}

TEST_CASE("filtered norms") {
    SECTION("no filter reproduces the sector normalization") {
        for (int k : {0, 1, 2, 5}) {
            const double expected = std::exp(log_sector_norm(k));
            REQUIRE(filtered_norm(k, Flavor::Phi, FilterSpec::none()) ==
                    Approx(expected).epsilon(1e-12));
        }
    }
    SECTION("flavors agree for every symmetric predicate") {
        for (const FilterSpec& filter :
             {FilterSpec::none(), FilterSpec::corner(0), FilterSpec::corner(2), FilterSpec::mdf(2),
              FilterSpec::mdf(5)}) {
            for (int k = 0; k <= 30; ++k) {
                const double phi = survival_fraction(k, Flavor::Phi, filter);
                const double bar = survival_fraction(k, Flavor::PhiBar, filter);
                REQUIRE(phi == Approx(bar).margin(1e-12));
            }
        }
    }
    SECTION("corner survival grows with the threshold") {
        for (int k : {2, 5, 11}) {
            double previous = 0.0;
            for (int d = 0; d <= 2 * k + 2; ++d) {
                const double current = survival_fraction(k, Flavor::Phi, FilterSpec::corner(d));
                REQUIRE(current >= previous - 1e-15);
                previous = current;
            }
            REQUIRE(previous == Approx(1.0).margin(1e-12));
        }
    }
}

TEST_CASE("asymmetric predicates are rejected") {
    REQUIRE_THROWS_AS(FilterSpec::custom([](int, int delta) { return delta >= 0; }, "bad"),
                      ConfigError);
    const FilterSpec ok =
        FilterSpec::custom([](int, int delta) { return std::abs(delta) >= 1; }, "abs");
    REQUIRE(ok.passes(3, -3));
    REQUIRE(ok.passes(3, 3));
}

TEST_CASE("preselected weights") {
    const Gain gain(0.8);
    SECTION("no filter reduces to the gain weights") {
        const WeightVector plain = gain_weights(gain, 1e-10);
        const WeightVector same = preselected_weights(gain, FilterSpec::none(), 1e-10);
        REQUIRE(same.k_max == plain.k_max);
        for (int k = 0; k <= plain.k_max; ++k)
            REQUIRE(same.weights[k] == Approx(plain.weights[k]).margin(1e-15));
    }
    SECTION("corner thresold zero keeps the closed-form weights") {
        // With only extremal components surviving, N_k^P = (2k+1)! and the
        // normalization telescopes to (beta_k^P)^2 = sech^3(g) (tanh^2/4)^k (2k+1)!/k!^2.
        const WeightVector w = preselected_weights(gain, FilterSpec::corner(0), 1e-10);
        const double sech = 1.0 / std::cosh(0.8);
        const double t2 = std::tanh(0.8) * std::tanh(0.8);
        double expected = sech * sech * sech;  // k = 0 term
        REQUIRE(w.weights[0] == Approx(expected).margin(1e-12));
        expected *= (t2 / 4.0) * 6.0;  // (2k+1)!/k!^2 steps 1 -> 6
        REQUIRE(w.weights[1] == Approx(expected).margin(1e-12));
        REQUIRE(w.weights[0] == Approx(0.42).margin(0.01));
        REQUIRE(w.weights[1] == Approx(0.27).margin(0.01));
        REQUIRE(w.weights[2] == Approx(0.15).margin(0.01));
        double sum = w.tail_mass;
        for (double x : w.weights) sum += x;
        REQUIRE(sum == Approx(1.0).margin(1e-10));
        REQUIRE(w.tail_mass <= 1e-10);
    }
    SECTION("degenerate filter raises") {
        REQUIRE_THROWS_AS(preselected_weights(Gain(0.1), FilterSpec::mdf(400), 1e-10),
                          DegenerateFilterError);
    }
}

TEST_CASE("filtering preserves the parity split") {
    for (const FilterSpec& filter : {FilterSpec::corner(2), FilterSpec::mdf(3)}) {
        for (int k : {2, 3, 6}) {
            const SectorState phi = apply_filter(sector_state(k, Flavor::Phi), filter);
            const SectorState bar = apply_filter(sector_state(k, Flavor::PhiBar), filter);
            for (int m = 0; m <= 2 * k + 1; ++m) {
                if (m % 2 == 1) REQUIRE(phi.amplitudes[m] == 0.0);
                if (m % 2 == 0) REQUIRE(bar.amplitudes[m] == 0.0);
            }
        }
    }
}

TEST_CASE("corner threshold zero collapses sectors to extremal states") {
    for (int k = 0; k <= 12; ++k) {
        const SectorState phi = apply_filter(sector_state(k, Flavor::Phi), FilterSpec::corner(0));
        REQUIRE(phi.amplitudes[0] == Approx(1.0).margin(1e-13));  // |2k+1, 0_perp>
        for (int m = 1; m <= 2 * k + 1; ++m) REQUIRE(phi.amplitudes[m] == 0.0);
    }
}

TEST_CASE("success probability") {
    const Gain gain(0.8);
    SECTION("no filter always passes") {
        REQUIRE(success_probability(gain, FilterSpec::none(), 1e-10) ==
                Approx(1.0).margin(1e-12));
    }
    SECTION("vanishing gain passes the tightest corner") {
        REQUIRE(success_probability(Gain(1e-8), FilterSpec::corner(0), 1e-10) ==
                Approx(1.0).margin(1e-10));
    }
    SECTION("matches the dense double-index sum") {
        for (const FilterSpec& filter :
             {FilterSpec::corner(0), FilterSpec::corner(2), FilterSpec::mdf(2)}) {
            double dense = 0.0;
            for (int i = 0; i <= 45; ++i) {
                for (int j = 0; j <= 45; ++j) {
                    const double gamma = gamma_amplitude(i, j, gain);
                    const int sigma = 2 * i + 1 + 2 * j;
                    const int delta = 2 * j - (2 * i + 1);
                    if (filter.passes(sigma, delta)) dense += gamma * gamma;
                }
            }
            REQUIRE(success_probability(gain, filter, 1e-10) == Approx(dense).margin(1e-9));
        }
    }
    SECTION("tightest corner yield has a hyperbolic closed form") {
        for (double g : {0.3, 0.8, 1.2}) {
            REQUIRE(success_probability(Gain(g), FilterSpec::corner(0), 1e-12) ==
                    Approx(1.0 / std::cosh(g)).margin(1e-10));
        }
    }
}
