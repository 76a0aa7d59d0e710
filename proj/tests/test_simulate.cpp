#include <cmath>
#include <complex>
#include <numeric>

#include "doctest.h"
#include "occt/errors.hpp"
#include "occt/inversion.hpp"
#include "occt/simulate.hpp"
#include "occt/storage_stats.hpp"

using namespace occt;
using Cplx = std::complex<double>;

namespace {
const LevyModel kMm1 = LevyModel::cp_exp_drift(0.5, 1.0);
}

TEST_CASE("event-driven storage simulation") {
    SUBCASE("long-run fraction below tau matches the stationary law") {
        Rng rng(101);
        SimConfig cfg;
        cfg.horizon = 400000.0;
        cfg.tau = 1.0;
        const auto p = simulate_storage(kMm1, cfg, rng);
        CHECK(std::abs(p.alpha_t + p.beta_t - cfg.horizon) <= 1e-12 * cfg.horizon);
        // P(Q <= 1) = 1 - rho e^{-(mu_J - lambda) tau} = 1 - 0.5 e^{-0.5}
        CHECK(p.alpha_t / cfg.horizon ==
              doctest::Approx(1.0 - 0.5 * std::exp(-0.5)).epsilon(0.004));
    }
    SUBCASE("cycle statistics against the scale-function values") {
        Rng rng(11);
        const auto cyc = simulate_storage_cycles(kMm1, 1.0, 300000, rng);
        REQUIRE(cyc.size() == 300000);
        double sd = 0.0, su = 0.0, so = 0.0;
        for (const auto& c : cyc) {
            CHECK(c.d > 0.0);
            CHECK(c.u > 0.0);
            CHECK(c.overshoot > 0.0);
            sd += c.d;
            su += c.u;
            so += c.overshoot;
        }
        const double n = static_cast<double>(cyc.size());
        // (E D, E U) = (4.59489, 2); sd(D) ~ 5.1, sd(U) ~ 3.5
        CHECK(sd / n == doctest::Approx(4.59489).scale(1.0).epsilon(3.0 * 5.2 / std::sqrt(n)));
        CHECK(su / n == doctest::Approx(2.0).scale(1.0).epsilon(3.0 * 3.5 / std::sqrt(n)));
        // overshoot is Exp(mu_J) by memorylessness
        CHECK(so / n == doctest::Approx(1.0).scale(1.0).epsilon(0.01));
        std::vector<double> os;
        os.reserve(cyc.size());
        for (const auto& c : cyc) os.push_back(c.overshoot);
        const double ks =
            ks_statistic(os, [](double x) { return 1.0 - std::exp(-x); });
        CHECK(ks < ks_critical_value(0.01, os.size()));
    }
    SUBCASE("D_{i+1} independent of U_i; (D_i, U_i) covariance matches theory") {
        Rng rng(3);
        const auto cyc = simulate_storage_cycles(kMm1, 1.0, 200000, rng);
        const double n = static_cast<double>(cyc.size());
        double md = 0.0, mu = 0.0;
        for (const auto& c : cyc) {
            md += c.d;
            mu += c.u;
        }
        md /= n;
        mu /= n;
        double c_du = 0.0, c_lag = 0.0, vd = 0.0, vu = 0.0;
        for (size_t i = 0; i < cyc.size(); ++i) {
            vd += (cyc[i].d - md) * (cyc[i].d - md);
            vu += (cyc[i].u - mu) * (cyc[i].u - mu);
            c_du += (cyc[i].d - md) * (cyc[i].u - mu);
            if (i + 1 < cyc.size()) c_lag += (cyc[i + 1].d - md) * (cyc[i].u - mu);
        }
        vd /= n;
        vu /= n;
        c_du /= n;
        c_lag /= n;
        const double corr_se = 1.0 / std::sqrt(n);
        // lag correlation is structurally zero
        CHECK(std::abs(c_lag / std::sqrt(vd * vu)) < 3.0 * corr_se);
        // within-cycle covariance equals the closed form (= 0 for
        // memoryless exponential jumps)
        ScaleEvaluator s(kMm1);
        const double c_theory = storage::sojourn_moments(s, 1.0).summary.cov_DU;
        CHECK(std::abs(c_du - c_theory) < 3.0 * std::sqrt(vd * vu) * corr_se);
    }
    SUBCASE("phase-type jumps produce the dependence the closed form predicts") {
        // Erlang-2 jumps: overshoot remembers the running phase, so D and U
        // are genuinely dependent.
        const auto pt = LevyModel::cp_phase_type_drift(0.6, {1.0, 0.0},
                                                       {-2.0, 2.0, 0.0, -2.0});
        Rng rng(29);
        const auto cyc = simulate_storage_cycles(pt, 1.0, 150000, rng);
        const double n = static_cast<double>(cyc.size());
        double md = 0.0, mu = 0.0;
        for (const auto& c : cyc) {
            md += c.d;
            mu += c.u;
        }
        md /= n;
        mu /= n;
        double c_du = 0.0, vd = 0.0, vu = 0.0;
        for (const auto& c : cyc) {
            vd += (c.d - md) * (c.d - md);
            vu += (c.u - mu) * (c.u - mu);
            c_du += (c.d - md) * (c.u - mu);
        }
        vd /= n;
        vu /= n;
        c_du /= n;
        ScaleEvaluator s(pt);
        const auto stats = storage::sojourn_moments(s, 1.0);
        const auto [ed, eu] = storage::sojourn_means(s, 1.0);
        CHECK(md == doctest::Approx(ed).scale(1.0).epsilon(3.0 * std::sqrt(vd / n)));
        CHECK(mu == doctest::Approx(eu).scale(1.0).epsilon(3.0 * std::sqrt(vu / n)));
        const double se_cov = std::sqrt(vd * vu / n);  // conservative scale
        CHECK(std::abs(c_du - stats.summary.cov_DU) < 3.0 * se_cov);
        CHECK(stats.summary.cov_DU != doctest::Approx(0.0).epsilon(1e-6));
    }
    SUBCASE("bit-exact reproducibility") {
        SimConfig cfg;
        cfg.horizon = 500.0;
        cfg.tau = 1.0;
        Rng a(77), b(77);
        const auto pa = simulate_storage(kMm1, cfg, a);
        const auto pb = simulate_storage(kMm1, cfg, b);
        CHECK(pa.alpha_t == pb.alpha_t);
        CHECK(pa.beta_t == pb.beta_t);
    }
}

TEST_CASE("reflected Brownian Euler scheme") {
    SUBCASE("tau = 0 at zero drift: boundary occupation vanishes with dt") {
        Rng rng(5);
        SimConfig cfg;
        cfg.horizon = 50.0;
        cfg.tau = 0.0;
        cfg.dt = 1e-4;
        const auto p = simulate_rbm(0.0, 1.0, cfg, rng);
        CHECK(p.alpha_t / cfg.horizon < 0.05);
    }
    SUBCASE("transform oracle at t = 5") {
        // E e^{-alpha(5)} for mu=-1, sigma2=1, tau=1 from the closed-form
        // double transform inverted in q
        TransformFn fhat = [](Cplx q) {
            return storage::rbm_double_transform(-1.0, 1.0, 1.0, Cplx(1.0), q);
        };
        const double expect = invert(fhat, 5.0, {}).value;
        const std::int64_t reps = 4000;
        std::vector<double> vals(static_cast<size_t>(reps));
        for_each_replication(404, reps, [&](std::int64_t r, Rng& rng) {
            SimConfig cfg;
            cfg.horizon = 5.0;
            cfg.tau = 1.0;
            cfg.dt = 2e-4;
            vals[static_cast<size_t>(r)] =
                std::exp(-simulate_rbm(-1.0, 1.0, cfg, rng).alpha_t);
        });
        double mean = 0.0, var = 0.0;
        for (double v : vals) mean += v;
        mean /= static_cast<double>(reps);
        for (double v : vals) var += (v - mean) * (v - mean);
        var /= static_cast<double>(reps);
        const double se = std::sqrt(var / static_cast<double>(reps));
        // 3 s.e. plus an O(sqrt(dt)) discretization allowance
        CHECK(std::abs(mean - expect) < 3.0 * se + 2.0 * std::sqrt(2e-4));
    }
}

TEST_CASE("supremum epoch sampling") {
    SUBCASE("large q kills the residual") {
        Rng rng(13);
        std::vector<double> res;
        for (int i = 0; i < 3000; ++i)
            res.push_back(supremum_epoch_sample(0.0, 1.0, 100.0, 1e-4, rng).residual);
        std::sort(res.begin(), res.end());
        CHECK(res[static_cast<size_t>(0.99 * res.size())] < 0.1);
    }
    SUBCASE("distributional identity: residual and occupation share the law") {
        const std::int64_t n = 20000;
        std::vector<double> a(static_cast<size_t>(n)), r(static_cast<size_t>(n));
        for_each_replication(606, n, [&](std::int64_t i, Rng& rng) {
            a[static_cast<size_t>(i)] = supremum_epoch_sample(0.0, 1.0, 1.0, 1e-3, rng).alpha;
        });
        for_each_replication(707, n, [&](std::int64_t i, Rng& rng) {
            r[static_cast<size_t>(i)] =
                supremum_epoch_sample(0.0, 1.0, 1.0, 1e-3, rng).residual;
        });
        const double ks = ks_two_sample(a, r);
        CHECK(ks < ks_two_sample_critical_value(0.01, a.size(), r.size()));
    }
    SUBCASE("transform check against psi(q)/psi(q+theta), mu = -1") {
        // sqrt(dt) bias removed by two-level Richardson extrapolation
        auto mean_exp = [&](double dt, std::uint64_t seed, std::int64_t n) {
            std::vector<double> v(static_cast<size_t>(n));
            for_each_replication(seed, n, [&](std::int64_t i, Rng& rng) {
                v[static_cast<size_t>(i)] =
                    std::exp(-3.0 * supremum_epoch_sample(-1.0, 1.0, 1.0, dt, rng).alpha);
            });
            double m = 0.0;
            for (double x : v) m += x;
            m /= static_cast<double>(n);
            double var = 0.0;
            for (double x : v) var += (x - m) * (x - m);
            var /= static_cast<double>(n);
            return std::pair{m, var / static_cast<double>(n)};
        };
        const auto [m1, v1] = mean_exp(4e-4, 808, 12000);
        const auto [m2, v2] = mean_exp(1e-4, 809, 12000);
        const double est = 2.0 * m2 - m1;
        const double se = std::sqrt(4.0 * v2 + v1);
        const auto model = LevyModel::brownian(-1.0, 1.0);
        const double expect = model.psi(1.0) / model.psi(4.0);
        CHECK(std::abs(est - expect) < 3.0 * se + 0.002);
    }
}

TEST_CASE("bridge-corrected free BM occupation") {
    // boundary atoms are numerical artifacts only: with bridge detection the
    // measured atom mass at alpha = 0 stays O(dt)
    const std::int64_t n = 10000;
    std::vector<double> alphas(static_cast<size_t>(n));
    for_each_replication(55, n, [&](std::int64_t i, Rng& rng) {
        alphas[static_cast<size_t>(i)] = free_bm_occupation_bridge(-1.0, 1.0, 1.0, 1e-3, rng);
    });
    std::int64_t at_zero = 0, at_full = 0;
    for (double a : alphas) {
        if (a == 0.0) ++at_zero;
        if (a >= 1.0) ++at_full;
    }
    CHECK(static_cast<double>(at_zero) / static_cast<double>(n) < 0.003);
    CHECK(static_cast<double>(at_full) / static_cast<double>(n) < 0.003);
}

TEST_CASE("rbm discretization bias decays with dt at the documented order") {
    // bias per dt-doubling over an 8x span against the transform oracle;
    // sqrt(dt)-order decay corresponds to a per-doubling ratio near 1.4
    TransformFn fhat = [](Cplx q) {
        return storage::rbm_double_transform(-1.0, 1.0, 1.0, Cplx(1.0), q);
    };
    const double exact = invert(fhat, 2.0, {}).value;
    auto biased_mean = [&](double dt, std::uint64_t seed) {
        const std::int64_t n = 400000;
        std::vector<double> v(static_cast<size_t>(n));
        for_each_replication(seed, n, [&](std::int64_t i, Rng& rng) {
            SimConfig c;
            c.horizon = 2.0;
            c.tau = 1.0;
            c.dt = dt;
            v[static_cast<size_t>(i)] = std::exp(-simulate_rbm(-1.0, 1.0, c, rng).alpha_t);
        });
        double m = 0.0;
        for (double x : v) m += x;
        return m / static_cast<double>(n) - exact;
    };
    const double coarse = biased_mean(6.4e-2, 22);
    const double fine = biased_mean(8e-3, 23);
    const double per_doubling = std::cbrt(coarse / fine);
    CHECK(per_doubling > 1.2);
    CHECK(per_doubling < 2.8);
}
