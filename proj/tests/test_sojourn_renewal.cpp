#include <cmath>
#include <complex>

#include "doctest.h"
#include "occt/errors.hpp"
#include "occt/renewal.hpp"
#include "occt/rng.hpp"
#include "occt/sojourn_law.hpp"

using namespace occt;
using Cplx = std::complex<double>;

namespace {
const SojournLaw kExpExp =
    SojournLaw::independent(Marginal::exponential(1.0), Marginal::exponential(1.0));
const SojournLaw kDet =
    SojournLaw::independent(Marginal::deterministic(1.0), Marginal::deterministic(1.0));
}  // namespace

TEST_CASE("marginal families") {
    const auto e = Marginal::exponential(2.0);
    CHECK(e.mean() == doctest::Approx(0.5));
    CHECK(e.variance() == doctest::Approx(0.25));
    CHECK(e.cdf(0.5) == doctest::Approx(1.0 - std::exp(-1.0)));
    CHECK(e.mgf_sup() == doctest::Approx(2.0));
    CHECK(std::isinf(e.mgf(2.5)));

    const auto g = Marginal::erlang(3, 2.0);
    CHECK(g.mean() == doctest::Approx(1.5));
    CHECK(g.laplace(Cplx(1.0)).real() == doctest::Approx(std::pow(2.0 / 3.0, 3)));
    // Erlang cdf against a direct series value at one point
    CHECK(g.cdf(1.0) ==
          doctest::Approx(1.0 - std::exp(-2.0) * (1.0 + 2.0 + 2.0)).epsilon(1e-12));

    const auto d = Marginal::deterministic(1.0);
    CHECK(d.cdf(1.0) == 1.0);
    CHECK(d.cdf_strict(1.0) == 0.0);
    CHECK(d.variance() == 0.0);
}

TEST_CASE("independent product factorizes on a grid to 1e-12") {
    const auto law =
        SojournLaw::independent(Marginal::erlang(2, 1.5), Marginal::exponential(0.7));
    for (double a : {0.0, 0.4, 1.3})
        for (double b : {0.0, 0.9, 2.2}) {
            const Cplx lhs = law.L12(Cplx(a), Cplx(b));
            const Cplx rhs = law.L1(Cplx(a)) * law.LU(Cplx(b));
            CHECK(std::abs(lhs - rhs) < 1e-12);
        }
}

TEST_CASE("samplers: positivity, moments, serial independence") {
    Rng rng(11);
    SUBCASE("independent exponential means") {
        double sd = 0.0, su = 0.0;
        const int n = 400000;
        for (int i = 0; i < n; ++i) {
            const auto [d, u] = kExpExp.sample_pair(rng);
            CHECK(d > 0.0);
            CHECK(u > 0.0);
            sd += d;
            su += u;
        }
        CHECK(sd / n == doctest::Approx(1.0).epsilon(0.008));
        CHECK(su / n == doctest::Approx(1.0).epsilon(0.008));
    }
    SUBCASE("marshall-olkin covariance matches the closed form") {
        const auto mo = SojournLaw::marshall_olkin(1.0, 1.0, 1.0);
        const int n = 400000;
        double sd = 0.0, su = 0.0, sdu = 0.0;
        for (int i = 0; i < n; ++i) {
            const auto [d, u] = mo.sample_pair(rng);
            sd += d;
            su += u;
            sdu += d * u;
        }
        const double cov = sdu / n - (sd / n) * (su / n);
        // cov = rate_common / (total * (d+c) * (u+c)) = 1/12; s.e. ~ 2.4e-3
        CHECK(cov == doctest::Approx(1.0 / 12.0).scale(1.0).epsilon(0.01));
        CHECK(cov > 0.0);
        CHECK(mo.moments().cov_DU == doctest::Approx(1.0 / 12.0));
    }
    SUBCASE("consecutive pairs uncorrelated") {
        const auto mo = SojournLaw::marshall_olkin(1.0, 2.0, 0.5);
        const int n = 200000;
        double prev_u = 0.0, s_d = 0.0, s_u = 0.0, s_du = 0.0;
        std::vector<double> ds, us;
        for (int i = 0; i < n; ++i) {
            const auto [d, u] = mo.sample_pair(rng);
            if (i > 0) {
                s_d += d;
                s_u += prev_u;
                s_du += d * prev_u;
            }
            prev_u = u;
        }
        const double m = n - 1.0;
        const double corr_num = s_du / m - (s_d / m) * (s_u / m);
        CHECK(std::abs(corr_num) < 3.0 * 1.0 / std::sqrt(m));  // scaled moments O(1)
    }
    SUBCASE("empirical law requires samples") {
        CHECK_THROWS_AS(SojournLaw::empirical({}), EmptySample);
    }
}

TEST_CASE("alternating path simulation") {
    Rng rng(5);
    SUBCASE("deterministic alternation") {
        const auto p = simulate_alternating(kDet, 2.5, rng);
        CHECK(p.alpha_t == doctest::Approx(1.5));
        CHECK(p.beta_t == doctest::Approx(1.0));
        CHECK(p.in_A_at_t);
    }
    SUBCASE("occupation identity alpha + beta = t") {
        for (int i = 0; i < 200; ++i) {
            const double t = 0.5 + 0.37 * i;
            const auto p = simulate_alternating(kExpExp, t, rng);
            CHECK(std::abs(p.alpha_t + p.beta_t - t) <= 1e-12 * t);
        }
    }
    SUBCASE("atom of beta at zero") {
        const int n = 300000;
        int at_zero = 0;
        for (int i = 0; i < n; ++i)
            if (simulate_alternating(kExpExp, 1.0, rng).beta_t == 0.0) ++at_zero;
        CHECK(static_cast<double>(at_zero) / n ==
              doctest::Approx(std::exp(-1.0)).scale(1.0).epsilon(0.004));
    }
    SUBCASE("recorded cycles are strictly positive") {
        const auto p = simulate_alternating(kExpExp, 50.0, rng, true);
        CHECK(!p.cycle_pairs.empty());
        for (const auto& [d, u] : p.cycle_pairs) {
            CHECK(d > 0.0);
            CHECK(u > 0.0);
        }
    }
}

TEST_CASE("exact occupation CDF series") {
    SUBCASE("beta atom as x -> 0+") {
        const auto r = exact_cdf_beta(kExpExp, 1.0, 0.0);
        CHECK(r.value == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    }
    SUBCASE("deterministic cases") {
        CHECK(exact_cdf_beta(kDet, 2.5, 1.2).value == doctest::Approx(1.0));
        CHECK(exact_cdf_alpha(kDet, 2.5, 1.4).value == doctest::Approx(0.0));
        // beta(2.5) = 1 exactly, so P(beta <= 0.8) = 0
        CHECK(exact_cdf_beta(kDet, 2.5, 0.8).value == doctest::Approx(0.0));
    }
    SUBCASE("range validation") {
        CHECK_THROWS_AS(exact_cdf_beta(kExpExp, 1.0, 1.0), InvalidRange);
        CHECK_THROWS_AS(exact_cdf_beta(kExpExp, 1.0, -0.1), InvalidRange);
        CHECK_THROWS_AS(exact_cdf_alpha(kExpExp, 1.0, 2.0), InvalidRange);
    }
    SUBCASE("independent-product reduction: bivariate path is term-identical") {
        LatticeConfig biv;
        biv.force_bivariate = true;
        for (double x : {0.5, 1.0, 1.4}) {
            const auto fast = exact_cdf_beta(kExpExp, 2.0, x);
            const auto slow = exact_cdf_beta(kExpExp, 2.0, x, biv);
            CHECK(fast.value == doctest::Approx(slow.value).epsilon(1e-12));
            CHECK(fast.terms == slow.terms);
        }
    }
    SUBCASE("alpha/beta consistency at continuity points") {
        for (double x : {0.6, 1.0, 1.5}) {
            const auto a = exact_cdf_alpha(kExpExp, 2.0, x);
            const auto b = exact_cdf_beta(kExpExp, 2.0, 2.0 - x);
            CHECK(a.value ==
                  doctest::Approx(1.0 - b.value)
                      .epsilon(5.0 * (a.error_estimate + b.error_estimate) + 1e-4));
        }
    }
    SUBCASE("monotone in x and within [0, 1]") {
        double prev = -1.0;
        for (double x = 0.1; x < 2.0; x += 0.2) {
            const auto r = exact_cdf_beta(kExpExp, 2.0, x);
            CHECK(r.value >= 0.0);
            CHECK(r.value <= 1.0);
            CHECK(r.value >= prev - 1e-6);
            prev = r.value;
        }
    }
    SUBCASE("marshall-olkin joint lattice agrees with simulation") {
        const auto mo = SojournLaw::marshall_olkin(1.0, 1.0, 1.0);
        const auto r = exact_cdf_beta(mo, 2.0, 1.0);
        Rng rng(17);
        int hits = 0;
        const int n = 200000;
        for (int i = 0; i < n; ++i)
            if (simulate_alternating(mo, 2.0, rng).beta_t <= 1.0) ++hits;
        const double mc = static_cast<double>(hits) / n;
        const double se = std::sqrt(mc * (1.0 - mc) / n);
        CHECK(std::abs(r.value - mc) < 3.0 * se + r.error_estimate);
    }
    SUBCASE("grid-too-coarse reporting") {
        LatticeConfig strict;
        strict.h = 0.4;  // deliberately crude
        strict.disc_tol = 1e-6;
        CHECK_THROWS_AS(exact_cdf_beta(kExpExp, 2.0, 1.0, strict), GridTooCoarse);
    }
}

TEST_CASE("moment summaries") {
    SUBCASE("independent exponential") {
        const auto ms = moments(kExpExp);
        CHECK(ms.alpha == 1.0);
        CHECK(ms.beta == 1.0);
        CHECK(ms.var_D == 1.0);
        CHECK(ms.var_U == 1.0);
        CHECK(ms.cov_DU == 0.0);
        CHECK(ms.clt_scale == doctest::Approx(0.25));
    }
    SUBCASE("deterministic pair") {
        const auto ms = moments(kDet);
        CHECK(ms.var_D == 0.0);
        CHECK(ms.cov_DU == 0.0);
        CHECK(ms.clt_scale == 0.0);
    }
    SUBCASE("cauchy-schwarz keeps the scale nonnegative") {
        const auto mo = SojournLaw::marshall_olkin(0.3, 2.0, 1.7);
        const auto ms = mo.moments();
        CHECK(std::abs(ms.cov_DU) <= std::sqrt(ms.var_D * ms.var_U) + 1e-15);
        CHECK(ms.clt_scale >= 0.0);
    }
    SUBCASE("empirical moments") {
        Rng rng(23);
        std::vector<std::pair<double, double>> s;
        for (int i = 0; i < 200000; ++i) s.push_back(kExpExp.sample_pair(rng));
        const auto emp = SojournLaw::empirical(std::move(s));
        const auto ms = emp.moments();
        CHECK(ms.alpha == doctest::Approx(1.0).epsilon(0.01));
        CHECK(ms.var_U == doctest::Approx(1.0).epsilon(0.03));
        CHECK(ms.cov_DU == doctest::Approx(0.0).scale(1.0).epsilon(0.01));
    }
}

TEST_CASE("gaussian approximation") {
    const auto ms = moments(kExpExp);
    CHECK(normal_approx_cdf(ms, 8.0, 4.0) == doctest::Approx(0.5));
    CHECK(normal_approx_cdf(ms, 8.0, 1e9) == doctest::Approx(1.0));
    CHECK(normal_approx_cdf(ms, 8.0, -1e9) == doctest::Approx(0.0).scale(1.0));
    double prev = 0.0;
    for (double x = 0.0; x <= 8.0; x += 0.25) {
        const double v = normal_approx_cdf(ms, 8.0, x);
        CHECK(v >= prev);
        prev = v;
    }
    CHECK_THROWS_AS(normal_approx_cdf(moments(kDet), 1.0, 0.5), DegenerateVariance);
}

TEST_CASE("swapped law exchanges the roles") {
    const auto law =
        SojournLaw::independent(Marginal::exponential(2.0), Marginal::erlang(2, 1.0));
    const auto sw = law.swapped();
    CHECK(sw.moments().alpha == doctest::Approx(law.moments().beta));
    CHECK(sw.L1(Cplx(0.7)).real() == doctest::Approx(law.LU(Cplx(0.7)).real()));
    CHECK(std::abs(sw.L12(Cplx(0.3), Cplx(0.9)) - law.L12(Cplx(0.9), Cplx(0.3))) < 1e-15);
    CHECK(sw.cdf_D(1.0) == doctest::Approx(law.cdf_U(1.0)));
    Rng rng(2);
    const auto [d, u] = sw.sample_pair(rng);
    CHECK(d > 0.0);
    CHECK(u > 0.0);
}

TEST_CASE("storage-induced cycle law sampling") {
    const auto law = SojournLaw::storage_induced(LevyModel::cp_exp_drift(0.5, 1.0), 1.0);
    Rng rng(7);
    double su = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const auto [d, u] = law.sample_pair(rng);
        CHECK(d > 0.0);
        CHECK(u > 0.0);
        su += u;
    }
    // E U = psi'(0) * mu_J^{-1}... = 2 exactly for these parameters
    CHECK(su / n == doctest::Approx(2.0).epsilon(0.02));
    // unsupported for Brownian driving processes
    CHECK_THROWS_AS(SojournLaw::storage_induced(LevyModel::brownian(-1.0, 1.0), 1.0),
                    UnsupportedKind);
}
