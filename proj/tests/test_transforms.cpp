#include <cmath>
#include <complex>
#include <limits>

#include "doctest.h"
#include "occt/errors.hpp"
#include "occt/renewal.hpp"
#include "occt/rng.hpp"
#include "occt/transforms.hpp"

using namespace occt;
using Cplx = std::complex<double>;

namespace {
const SojournLaw kExpExp =
    SojournLaw::independent(Marginal::exponential(1.0), Marginal::exponential(1.0));
}

TEST_CASE("double transform of the occupation time") {
    SUBCASE("theta = 0 collapses to 1/q at machine precision") {
        Rng rng(31);
        for (int i = 0; i < 50; ++i) {
            const double q = 0.05 + 3.0 * rng.uniform();
            const auto law = SojournLaw::independent(
                Marginal::exponential(0.3 + 2.0 * rng.uniform()),
                Marginal::erlang(1 + static_cast<int>(rng.bounded(3)),
                                 0.5 + rng.uniform()));
            const double v = alpha_double_transform(law, 0.0, q);
            CHECK(std::abs(v * q - 1.0) <= 16 * std::numeric_limits<double>::epsilon());
        }
    }
    SUBCASE("closed-value anchor for Exp(1) x Exp(1)") {
        // L1(2) = 1/3, L12(2,1) = 1/6: (6/5) (1/3 + 1/6) = 3/5
        CHECK(alpha_double_transform(kExpExp, 1.0, 1.0) ==
              doctest::Approx(0.6).epsilon(1e-15));
    }
    SUBCASE("nonincreasing in theta, values in (0, 1/q]") {
        for (double q : {0.5, 1.0, 2.0}) {
            double prev = 1.0 / q + 1e-12;
            for (double th = 0.0; th <= 5.0; th += 0.25) {
                const double v = alpha_double_transform(kExpExp, th, q);
                CHECK(v > 0.0);
                CHECK(v <= prev);
                prev = v;
            }
        }
    }
    SUBCASE("split decomposition sums to q times the transform") {
        for (double th : {0.3, 1.0}) {
            for (double q : {0.4, 1.7}) {
                const auto [k1, k2] = alpha_transform_split(kExpExp, th, q);
                CHECK(k1 + k2 ==
                      doctest::Approx(q * alpha_double_transform(kExpExp, th, q))
                          .epsilon(1e-14));
            }
        }
    }
}

TEST_CASE("availability transforms") {
    SUBCASE("components sum to 1/q exactly") {
        Rng rng(7);
        for (int i = 0; i < 50; ++i) {
            const double q = 0.05 + 4.0 * rng.uniform();
            const auto mo = SojournLaw::marshall_olkin(0.4 + rng.uniform(),
                                                       0.4 + rng.uniform(), rng.uniform());
            const auto [in_a, in_b] = availability_transforms(mo, q);
            CHECK(std::abs((in_a + in_b) * q - 1.0) <=
                  16 * std::numeric_limits<double>::epsilon());
        }
    }
    SUBCASE("Exp(1) x Exp(1) at q = 1") {
        CHECK(availability_transforms(kExpExp, 1.0).first ==
              doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    }
    SUBCASE("rare departures from A push availability to 1/q") {
        const auto slow =
            SojournLaw::independent(Marginal::exponential(1e-7), Marginal::exponential(1.0));
        CHECK(availability_transforms(slow, 1.0).first == doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("availability in the time domain") {
    // partial fractions: P(in A at t) = 1/2 + e^{-2t}/2
    for (double t : {0.1, 0.5, 1.0, 2.0, 5.0, 10.0}) {
        const auto r = availability_at(kExpExp, t);
        CHECK(r.value == doctest::Approx(0.5 + 0.5 * std::exp(-2.0 * t)).epsilon(1e-8));
        CHECK(r.accuracy_reached);
    }
    // t -> 0+ starts in A; t -> infinity relaxes to alpha/(alpha+beta)
    CHECK(availability_at(kExpExp, 1e-4).value == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(availability_at(kExpExp, 40.0).value == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("occupation CDF from the law route") {
    SUBCASE("endpoints") {
        CHECK(occupation_cdf_from_law(kExpExp, 2.0, 2.0).value == 1.0);
        CHECK(occupation_cdf_from_law(kExpExp, 2.0, 0.0).value == 0.0);
        CHECK_THROWS_AS(occupation_cdf_from_law(kExpExp, 2.0, 2.5), InvalidRange);
    }
    SUBCASE("matches the series on interior points") {
        for (double x : {0.6, 1.0, 1.5}) {
            const auto inv = occupation_cdf_from_law(kExpExp, 2.0, x);
            LatticeConfig fine;
            fine.h = 0.004;
            const auto ser = exact_cdf_alpha(kExpExp, 2.0, x, fine);
            CHECK(std::abs(inv.value - ser.value) < 5e-4 + ser.error_estimate);
        }
    }
    SUBCASE("CDF of a continuous part is monotone after clamping") {
        double prev = 0.0;
        for (double x = 0.2; x < 2.0; x += 0.2) {
            const double v = occupation_cdf_from_law(kExpExp, 2.0, x).value;
            CHECK(v >= prev - 1e-7);
            CHECK(v <= 1.0);
            prev = v;
        }
    }
}

TEST_CASE("divergent-transform guard") {
    // A broken law evaluator: L12 >= 1 cannot happen for proper laws with
    // q > 0, so the guard signals implementation bugs.
    CHECK_THROWS_AS(alpha_double_transform(kExpExp, 1.0, 0.0), InvalidRange);
    CHECK_THROWS_AS(alpha_double_transform(kExpExp, -0.5, 1.0), InvalidRange);
}
