#include "occt/validate.hpp"

#include <algorithm>
#include <array>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>

#include "occt/ldp.hpp"
#include "occt/renewal.hpp"
#include "occt/simulate.hpp"
#include "occt/storage_stats.hpp"
#include "occt/transforms.hpp"

namespace occt {

namespace {

using Cplx = std::complex<double>;

const LevyModel& mm1_model() {
    static const LevyModel m = LevyModel::cp_exp_drift(0.5, 1.0);
    return m;
}
const SojournLaw& exp_exp_law() {
    static const SojournLaw l =
        SojournLaw::independent(Marginal::exponential(1.0), Marginal::exponential(1.0));
    return l;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

CriterionResult make(int id, const std::string& name, double observed, double threshold,
                     std::string details = {}) {
    CriterionResult c;
    c.id = id;
    c.name = name;
    c.observed = observed;
    c.threshold = threshold;
    c.pass = observed <= threshold;
    c.details = std::move(details);
    return c;
}

// --- criterion 1 -----------------------------------------------------------

CriterionResult criterion_transform_normalization(std::uint64_t seed) {
    Rng rng(seed, 1);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double q = 0.05 + 4.0 * rng.uniform();
        SojournLaw law = (i % 2 == 0)
                             ? SojournLaw::independent(
                                   Marginal::exponential(0.3 + 2.0 * rng.uniform()),
                                   Marginal::erlang(1 + static_cast<int>(rng.bounded(3)),
                                                    0.4 + rng.uniform()))
                             : SojournLaw::marshall_olkin(0.4 + rng.uniform(),
                                                          0.4 + rng.uniform(), rng.uniform());
        worst = std::max(worst, std::abs(q * alpha_double_transform(law, 0.0, q) - 1.0));
        const auto [in_a, in_b] = availability_transforms(law, q);
        worst = std::max(worst, std::abs(q * (in_a + in_b) - 1.0));
    }
    return make(1, "transform-normalization", worst, 2e-14,
                "theta=0 collapse and availability sum rule, 100 random laws");
}

// --- criterion 2 -----------------------------------------------------------

CriterionResult criterion_availability_inversion() {
    double worst = 0.0;
    for (double t : {0.1, 0.5, 1.0, 2.0, 5.0, 10.0}) {
        const double v = availability_at(exp_exp_law(), t).value;
        worst = std::max(worst, std::abs(v - 0.5 - 0.5 * std::exp(-2.0 * t)));
    }
    return make(2, "availability-inversion", worst, 1e-8,
                "partial-fraction oracle 1/2 + e^{-2t}/2, t in {0.1..10}");
}

// --- criterion 3 -----------------------------------------------------------

CriterionResult criterion_series_inversion_simulation(std::uint64_t seed) {
    const auto& law = exp_exp_law();
    const double ts[4] = {1.0, 2.0, 3.0, 4.0};
    const double fracs[5] = {0.25, 0.4, 0.5, 0.6, 0.75};

    // 1e7 paths, occupation recorded at each horizon checkpoint
    constexpr std::int64_t kPaths = 10000000;
    constexpr std::int64_t kChunks = 250;
    constexpr std::int64_t kPerChunk = kPaths / kChunks;
    std::vector<std::array<std::int64_t, 20>> counts(kChunks);
    for_each_replication(seed ^ 0x3333, kChunks, [&](std::int64_t chunk, Rng& rng) {
        auto& local = counts[static_cast<size_t>(chunk)];
        local.fill(0);
        for (std::int64_t p = 0; p < kPerChunk; ++p) {
            double elapsed = 0.0, alpha = 0.0;
            int k = 0;
            bool in_a = true;
            double seg = 0.0;
            // walk checkpoints through the alternating path
            double d = 0.0, u = 0.0;
            while (k < 4) {
                if (seg <= 0.0) {
                    if (in_a) {
                        std::tie(d, u) = law.sample_pair(rng);
                        seg = d;
                    } else {
                        seg = u;
                    }
                }
                const double next_cp = ts[k];
                const double step = std::min(seg, next_cp - elapsed);
                if (in_a) alpha += step;
                elapsed += step;
                seg -= step;
                if (seg <= 0.0) in_a = !in_a;
                if (elapsed >= next_cp - 1e-15) {
                    for (int j = 0; j < 5; ++j)
                        if (alpha <= fracs[j] * ts[k] + 0.0003125)
                            ++local[static_cast<size_t>(5 * k + j)];
                    ++k;
                }
            }
        }
    });
    std::array<std::int64_t, 20> total{};
    for (const auto& c : counts)
        for (int i = 0; i < 20; ++i) total[static_cast<size_t>(i)] += c[static_cast<size_t>(i)];

    LatticeConfig grid;
    grid.h = 0.000625;
    grid.tol = 1e-6;
    double worst_si = 0.0;   // series vs inversion, threshold 5e-3
    double worst_mc = 0.0;   // both vs MC, in units of 3 s.e.
    for (int k = 0; k < 4; ++k) {
        for (int j = 0; j < 5; ++j) {
            const double t = ts[k];
            // half-lattice alignment keeps the box edges bias-free
            const double x = fracs[j] * t + 0.5 * grid.h;
            const double mc =
                static_cast<double>(total[static_cast<size_t>(5 * k + j)]) / kPaths;
            const double se = std::sqrt(std::max(mc * (1.0 - mc), 1e-12) / kPaths);
            const double series = exact_cdf_alpha(law, t, x, grid).value;
            const double inv = occupation_cdf_from_law(law, t, x).value;
            worst_si = std::max(worst_si, std::abs(series - inv));
            worst_mc = std::max(worst_mc, std::abs(series - mc) / (3.0 * se));
            worst_mc = std::max(worst_mc, std::abs(inv - mc) / (3.0 * se));
        }
    }
    // single figure of merit: max(series-vs-inversion in units of 5e-3,
    // MC deviations in units of 3 s.e.)
    const double observed = std::max(worst_si / 5e-3, worst_mc);
    return make(3, "series-inversion-simulation", observed, 1.0,
                "20 (t,x) points; max(|ser-inv|/5e-3, |.-MC|/3se); |ser-inv|=" +
                    fmt(worst_si));
}

// --- criterion 4 -----------------------------------------------------------

CriterionResult criterion_transform_route_identity() {
    const auto law = SojournLaw::storage_induced(mm1_model(), 1.0);
    ScaleEvaluator s(mm1_model());
    double worst = 0.0;
    for (int i = 1; i <= 5; ++i)
        for (int j = 1; j <= 5; ++j) {
            const double th = 0.4 * i;
            const double q = 0.4 * j;
            worst = std::max(worst, std::abs(alpha_double_transform(law, th, q) -
                                             storage::occupation_double_transform(s, 1.0, th, q)));
        }
    return make(4, "renewal-vs-scale-transform", worst, 1e-8,
                "cycle transforms fed through the renewal double transform, 5x5 grid");
}

// --- criterion 5 -----------------------------------------------------------

CriterionResult criterion_sojourn_moments_vs_simulation(std::uint64_t seed) {
    constexpr std::int64_t kCycles = 10000000;
    constexpr std::int64_t kChunks = 250;
    constexpr std::int64_t kPerChunk = kCycles / kChunks;
    struct Sums {
        double d = 0, u = 0, d2 = 0, u2 = 0, du = 0, d3 = 0, d4 = 0, u3 = 0, u4 = 0,
               d2u = 0, du2 = 0, d2u2 = 0;
    };
    std::vector<Sums> sums(kChunks);
    for_each_replication(seed ^ 0x5555, kChunks, [&](std::int64_t chunk, Rng& rng) {
        auto cyc = simulate_storage_cycles(mm1_model(), 1.0, kPerChunk, rng);
        auto& s = sums[static_cast<size_t>(chunk)];
        for (const auto& c : cyc) {
            const double d = c.d, u = c.u;
            s.d += d;
            s.u += u;
            s.d2 += d * d;
            s.u2 += u * u;
            s.du += d * u;
            s.d3 += d * d * d;
            s.d4 += d * d * d * d;
            s.u3 += u * u * u;
            s.u4 += u * u * u * u;
            s.d2u += d * d * u;
            s.du2 += d * u * u;
            s.d2u2 += d * d * u * u;
        }
    });
    Sums t;
    for (const auto& s : sums) {
        t.d += s.d;
        t.u += s.u;
        t.d2 += s.d2;
        t.u2 += s.u2;
        t.du += s.du;
        t.d3 += s.d3;
        t.d4 += s.d4;
        t.u3 += s.u3;
        t.u4 += s.u4;
        t.d2u += s.d2u;
        t.du2 += s.du2;
        t.d2u2 += s.d2u2;
    }
    const double n = static_cast<double>(kCycles);
    const double md = t.d / n, mu = t.u / n;
    const double vd = t.d2 / n - md * md;
    const double vu = t.u2 / n - mu * mu;
    const double cdu = t.du / n - md * mu;
    // central fourth moments for the variance-estimator standard errors
    const double c4d = t.d4 / n - 4.0 * md * t.d3 / n + 6.0 * md * md * t.d2 / n -
                       3.0 * md * md * md * md;
    const double c4u = t.u4 / n - 4.0 * mu * t.u3 / n + 6.0 * mu * mu * t.u2 / n -
                       3.0 * mu * mu * mu * mu;
    // E[(D-mD)^2 (U-mU)^2] for the covariance s.e. (raw-moment expansion)
    const double c22 = t.d2u2 / n - 2.0 * mu * t.d2u / n - 2.0 * md * t.du2 / n +
                       mu * mu * t.d2 / n + md * md * t.u2 / n + 4.0 * md * mu * t.du / n -
                       3.0 * md * md * mu * mu;

    ScaleEvaluator scale(mm1_model());
    const auto stats = storage::sojourn_moments(scale, 1.0);
    const auto& ms = stats.summary;

    const double se_md = std::sqrt(vd / n);
    const double se_mu = std::sqrt(vu / n);
    const double se_vd = std::sqrt(std::max(c4d - vd * vd, 0.0) / n);
    const double se_vu = std::sqrt(std::max(c4u - vu * vu, 0.0) / n);
    const double se_c = std::sqrt(std::max(c22 - cdu * cdu, 0.0) / n);

    double z = 0.0;
    z = std::max(z, std::abs(md - ms.alpha) / (3.0 * se_md));
    z = std::max(z, std::abs(mu - ms.beta) / (3.0 * se_mu));
    z = std::max(z, std::abs(vd - ms.var_D) / (3.0 * se_vd));
    z = std::max(z, std::abs(vu - ms.var_U) / (3.0 * se_vu));
    z = std::max(z, std::abs(cdu - ms.cov_DU) / (3.0 * se_c));
    // exact closed-form anchors: ED = 4.59489 (5 printed digits), EU = 2
    const double anchor =
        std::max(std::abs(ms.alpha - 4.59489) / 1e-5, std::abs(ms.beta - 2.0) / 1e-10);
    const double observed = std::max(z, anchor);
    std::string detail = "ED=" + fmt(ms.alpha) + " EU=" + fmt(ms.beta) + " varD=" +
                         fmt(ms.var_D) + " varU=" + fmt(ms.var_U) + " cov=" + fmt(ms.cov_DU) +
                         " (var_U arbitrated=" + (ms.var_U_from_transform ? "yes" : "no") + ")";
    return make(5, "sojourn-moments-vs-simulation", observed, 1.0, detail);
}

// --- criterion 6 -----------------------------------------------------------

CriterionResult criterion_selfconv_lemma() {
    double worst = 0.0;
    for (const auto& m : {mm1_model(), LevyModel::brownian(-1.0, 1.0)}) {
        ScaleEvaluator s(m);
        for (int i = 0; i < 10; ++i)
            for (int j = 0; j < 10; ++j) {
                const double q = 0.25 * i;
                const double x = 0.1 + 0.2 * j;
                const double h = 1e-3 * (1.0 + q);
                auto diff = [&](double hh) {
                    return (s.W(q + hh, x) - s.W(q - hh, x)) / (2.0 * hh);
                };
                const double dq = (4.0 * diff(0.5 * h) - diff(h)) / 3.0;
                worst = std::max(worst, std::abs(dq - s.selfconv(q, x)));
            }
    }
    return make(6, "scale-derivative-selfconvolution", worst, 1e-5,
                "d/dq W = W*W on a 10x10 grid for both shipped kinds");
}

// --- criterion 7 -----------------------------------------------------------

CriterionResult criterion_brownian_closed_form() {
    double worst = 0.0;
    for (double mu : {-0.5, -1.0, -2.0})
        for (double sigma2 : {0.5, 1.0, 2.0}) {
            ScaleEvaluator s(LevyModel::brownian(mu, sigma2));
            for (double tau : {0.5, 1.0, 3.0})
                for (double th : {0.5, 1.0})
                    for (double q : {0.7, 1.3})
                        worst = std::max(
                            worst,
                            std::abs(storage::occupation_double_transform(s, tau, th, q) -
                                     storage::rbm_double_transform(mu, sigma2, tau, th, q)));
        }
    // the mu = 0, sigma2 = 1 case remains evaluable (handbook special case)
    const double special = storage::rbm_double_transform(0.0, 1.0, 1.0, 1.0, 1.0);
    return make(7, "brownian-closed-form", worst, 1e-10,
                "grid over (mu, sigma2, tau, theta, q); mu=0 special case value " +
                    fmt(special));
}

// --- criterion 8 -----------------------------------------------------------

CriterionResult criterion_free_process_limit(std::uint64_t seed) {
    ScaleEvaluator s(mm1_model());
    const double lim = std::abs(storage::occupation_double_transform(s, 200.0, 1.0, 1.0) -
                                storage::free_occupation_double_transform(mm1_model(), 1.0, 1.0));

    constexpr std::int64_t kReps = 100000;
    std::vector<double> alpha(kReps), residual(kReps);
    for_each_replication(seed ^ 0x8888, kReps, [&](std::int64_t i, Rng& rng) {
        alpha[static_cast<size_t>(i)] = supremum_epoch_sample(0.0, 1.0, 1.0, 1e-3, rng).alpha;
    });
    for_each_replication(seed ^ 0x9999, kReps, [&](std::int64_t i, Rng& rng) {
        residual[static_cast<size_t>(i)] =
            supremum_epoch_sample(0.0, 1.0, 1.0, 1e-3, rng).residual;
    });
    const double ks = ks_two_sample(alpha, residual);
    const double crit = ks_two_sample_critical_value(0.01, kReps, kReps);
    const double observed = std::max(lim / 1e-6, ks / crit);
    return make(8, "free-process-limit-and-identity", observed, 1.0,
                "|tau=200 - limit|=" + fmt(lim) + "; two-sample KS=" + fmt(ks) +
                    " (1% crit " + fmt(crit) + ")");
}

// --- criterion 9 -----------------------------------------------------------

CriterionResult criterion_bm_density(std::uint64_t seed) {
    const double arcsine_gap =
        std::abs(storage::bm_free_occupation_density(0.0, 1.0, 0.5) - 2.0 / std::numbers::pi);

    boost::math::quadrature::tanh_sinh<double> integrator;
    const double mass = integrator.integrate(
        [](double u) { return storage::bm_free_occupation_density(-1.0, 1.0, u); }, 0.0, 1.0);

    constexpr std::int64_t kReps = 100000;
    std::vector<std::int8_t> at_edge(kReps, 0);
    for_each_replication(seed ^ 0x99aa, kReps, [&](std::int64_t i, Rng& rng) {
        const double a = free_bm_occupation_bridge(-1.0, 1.0, 1.0, 1e-3, rng);
        at_edge[static_cast<size_t>(i)] = (a <= 0.0 || a >= 1.0) ? 1 : 0;
    });
    std::int64_t edges = 0;
    for (auto v : at_edge) edges += v;
    const double atom_mass = static_cast<double>(edges) / kReps;

    const double total_gap = std::abs(mass + atom_mass - 1.0);
    const double observed = std::max(arcsine_gap / 1e-12, total_gap / 1e-3);
    return make(9, "bm-occupation-density", observed, 1.0,
                "arcsine gap=" + fmt(arcsine_gap) + "; density mass=" + fmt(mass) +
                    " + atoms=" + fmt(atom_mass));
}

// --- criterion 10 ----------------------------------------------------------

CriterionResult criterion_clt(std::uint64_t seed) {
    constexpr std::int64_t kReps = 10000;
    const double t = 2000.0;

    // (a) independent Exp(1) x Exp(1), C = 1/4
    std::vector<double> z_exp(kReps);
    for_each_replication(seed ^ 0xaaaa, kReps, [&](std::int64_t i, Rng& rng) {
        const auto p = simulate_alternating(exp_exp_law(), t, rng);
        z_exp[static_cast<size_t>(i)] = (p.alpha_t - 0.5 * t) / std::sqrt(0.25 * t);
    });
    const double ks_exp = ks_statistic(z_exp, std_normal_cdf);

    // (b) M/M/1 storage law with constants from the scale functions
    ScaleEvaluator s(mm1_model());
    const auto ms = storage::sojourn_moments(s, 1.0).summary;
    const double center = ms.alpha / (ms.alpha + ms.beta) * t;
    const double spread = std::sqrt(ms.clt_scale * t);
    std::vector<double> z_mm1(kReps);
    for_each_replication(seed ^ 0xbbbb, kReps, [&](std::int64_t i, Rng& rng) {
        SimConfig cfg;
        cfg.horizon = t;
        cfg.tau = 1.0;
        const auto p = simulate_storage(mm1_model(), cfg, rng);
        z_mm1[static_cast<size_t>(i)] = (p.alpha_t - center) / spread;
    });
    const double ks_mm1 = ks_statistic(z_mm1, std_normal_cdf);

    const double observed = std::max(ks_exp, ks_mm1);
    return make(10, "clt-normal-approximation", observed, 0.02,
                "KS(exp/exp)=" + fmt(ks_exp) + " KS(storage)=" + fmt(ks_mm1) +
                    " at t=2000, n=10^4");
}

// --- criterion 11 ----------------------------------------------------------

CriterionResult criterion_ldp(std::uint64_t seed) {
    const auto& law = exp_exp_law();
    const double d2_gap = std::abs(drain_rate(law, 2.0) - 1.0 / std::sqrt(2.0));
    const double l2_gap = std::abs(cumulant(law, 2.0) - std::sqrt(2.0));

    // Tail simulation exactly as prescribed: 1e6 direct paths at t = 500.
    // lambda*(0.7) ~ 0.0835 puts the event at ~ e^{-41.7}; the empirical
    // count is expected to be zero, which this criterion reports honestly.
    constexpr std::int64_t kPaths = 1000000;
    constexpr std::int64_t kChunks = 250;
    std::vector<std::int64_t> hits(kChunks, 0);
    for_each_replication(seed ^ 0xcccc, kChunks, [&](std::int64_t chunk, Rng& rng) {
        std::int64_t local = 0;
        for (std::int64_t p = 0; p < kPaths / kChunks; ++p) {
            const auto path = simulate_alternating(law, 500.0, rng);
            if (path.alpha_t / 500.0 > 0.7) ++local;
        }
        hits[static_cast<size_t>(chunk)] = local;
    });
    std::int64_t total = 0;
    for (auto h : hits) total += h;
    const double p_hat = static_cast<double>(total) / kPaths;
    const double rate = rate_function(law, 0.7).value;
    const double sim_rate =
        p_hat > 0.0 ? -std::log(p_hat) / 500.0 : std::numeric_limits<double>::infinity();
    const double rel_gap = std::abs(sim_rate - rate) / rate;

    const double observed = std::max({d2_gap / 1e-10, l2_gap / 1e-10, rel_gap / 0.10});
    return make(11, "ldp-rate-function", observed, 1.0,
                "d(2), lambda(2) closed form; tail: hits=" + std::to_string(total) +
                    "/10^6, lambda*(0.7)=" + fmt(rate) + ", sim rate=" + fmt(sim_rate));
}

// ---------------------------------------------------------------------------

ValidationReport run_core(std::uint64_t seed) {
    ValidationReport rep;
    rep.criteria.push_back(criterion_transform_normalization(seed));
    rep.criteria.push_back(criterion_availability_inversion());
    rep.criteria.push_back(criterion_series_inversion_simulation(seed));
    rep.criteria.push_back(criterion_transform_route_identity());
    rep.criteria.push_back(criterion_sojourn_moments_vs_simulation(seed));
    rep.criteria.push_back(criterion_selfconv_lemma());
    rep.criteria.push_back(criterion_brownian_closed_form());
    rep.criteria.push_back(criterion_free_process_limit(seed));
    rep.criteria.push_back(criterion_bm_density(seed));
    rep.criteria.push_back(criterion_clt(seed));
    rep.criteria.push_back(criterion_ldp(seed));
    return rep;
}

}  // namespace

bool ValidationReport::all_pass() const {
    for (const auto& c : criteria)
        if (!c.pass) return false;
    return true;
}

std::string ValidationReport::render() const {
    std::ostringstream out;
    for (const auto& c : criteria) {
        char line[512];
        std::snprintf(line, sizeof(line), "C%02d %-4s %-36s observed=%-12.6g threshold=%-12.6g %s\n",
                      c.id, c.pass ? "PASS" : "FAIL", c.name.c_str(), c.observed, c.threshold,
                      c.details.c_str());
        out << line;
    }
    out << (all_pass() ? "RESULT PASS" : "RESULT FAIL") << "\n";
    return out.str();
}

ValidationReport run_validation(std::uint64_t seed) {
    ValidationReport rep = run_core(seed);
    // reproducibility: the full suite rerun with the same seed must render
    // byte-identically
    ValidationReport again = run_core(seed);
    const bool identical = rep.render() == again.render();
    CriterionResult c;
    c.id = 12;
    c.name = "reproducibility";
    c.pass = identical;
    c.observed = identical ? 0.0 : 1.0;
    c.threshold = 0.0;
    c.details = identical ? "two runs byte-identical" : "reports differ";
    rep.criteria.push_back(c);
    return rep;
}

}  // namespace occt
