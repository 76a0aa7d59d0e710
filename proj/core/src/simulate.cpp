#include "occt/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "occt/errors.hpp"

namespace occt {

void SimConfig::validate() const {
    if (replications < 1) throw ConfigError("SimConfig: replications must be >= 1");
    if (dt <= 0.0) throw ConfigError("SimConfig: dt must be > 0");
    if (tau < 0.0) throw ConfigError("SimConfig: tau must be >= 0");
}

namespace {

// Event loop for the compound Poisson storage model with unit drain and
// reflection at 0, Q(0) = tau: exponential inter-jump gaps, linear decrease
// in between. Downcrossings of tau happen with equality, upcrossings with a
// jump; occupation of [0, tau] is accumulated exactly between events.
//
// Runs until the horizon (timed = true) or until `stop_cycles` cycles are
// complete. on_cycle(d, u, overshoot) fires at each downcrossing.
template <typename OnCycle>
PathSample run_storage(const LevyModel& model, double tau, bool timed, double horizon,
                       std::int64_t stop_cycles, Rng& rng, OnCycle&& on_cycle) {
    if (!model.bounded_variation())
        throw UnsupportedKind("simulate_storage: needs a bounded-variation compound Poisson model");
    const double lambda = model.jump_rate_lambda();
    PathSample out;
    double now = 0.0;
    double q = tau;             // current level
    bool below = true;          // Q <= tau; cycles start in A at level tau
    double phase_start = 0.0;   // start of the open D- or U-interval
    double d_len = 0.0;         // D length of the open cycle (set at upcross)
    double pending_overshoot = 0.0;
    std::int64_t cycles = 0;

    while (true) {
        const double gap = rng.exponential(lambda);
        const double jump_at = now + gap;

        if (timed && jump_at >= horizon) {
            if (below) {
                out.alpha_t += horizon - now;
                out.in_A_at_t = true;
            } else {
                const double cross = now + (q - tau);  // unit drain
                if (cross < horizon) {
                    out.beta_t += cross - now;
                    out.alpha_t += horizon - cross;
                    out.in_A_at_t = true;
                } else {
                    out.beta_t += horizon - now;
                    out.in_A_at_t = false;
                }
            }
            break;
        }

        const double level_at_jump = std::max(0.0, q - gap);
        if (below) {
            out.alpha_t += gap;
        } else if (level_at_jump <= tau) {
            // downcrossing with equality inside this gap: cycle completes
            const double cross = now + (q - tau);
            out.beta_t += cross - now;
            out.alpha_t += jump_at - cross;
            ++cycles;
            on_cycle(d_len, cross - phase_start, pending_overshoot);
            below = true;
            phase_start = cross;
            d_len = 0.0;
            if (!timed && cycles >= stop_cycles) {
                out.in_A_at_t = true;
                return out;
            }
        } else {
            out.beta_t += gap;
        }

        const double j = model.sample_jump(rng);
        const double after = level_at_jump + j;
        if (below && after > tau) {
            // upcrossing by a jump ends the D-interval
            d_len = jump_at - phase_start;
            pending_overshoot = after - tau;
            below = false;
            phase_start = jump_at;
        }
        q = after;
        now = jump_at;
    }
    return out;
}

}  // namespace

PathSample simulate_storage(const LevyModel& model, const SimConfig& cfg, Rng& rng,
                            std::vector<CycleRecord>* cycles) {
    cfg.validate();
    if (!(cfg.horizon > 0.0)) throw ConfigError("simulate_storage: horizon must be > 0");
    auto sink = [&](double d, double u, double o) {
        if (cycles) cycles->push_back({d, u, o});
    };
    return run_storage(model, cfg.tau, /*timed=*/true, cfg.horizon, 0, rng, sink);
}

std::vector<CycleRecord> simulate_storage_cycles(const LevyModel& model, double tau,
                                                 std::int64_t n, Rng& rng) {
    if (n < 1) throw ConfigError("simulate_storage_cycles: n must be >= 1");
    std::vector<CycleRecord> out;
    out.reserve(static_cast<size_t>(n));
    auto sink = [&](double d, double u, double o) { out.push_back({d, u, o}); };
    run_storage(model, tau, /*timed=*/false, 0.0, n, rng, sink);
    return out;
}

PathSample simulate_rbm(double mu, double sigma2, const SimConfig& cfg, Rng& rng) {
    cfg.validate();
    if (!(sigma2 > 0.0)) throw ConfigError("simulate_rbm: sigma2 must be > 0");
    if (!(cfg.horizon > 0.0)) throw ConfigError("simulate_rbm: horizon must be > 0");
    const double dt = cfg.dt;
    const double sd = std::sqrt(sigma2 * dt);
    const double tau = cfg.tau;
    const auto steps = static_cast<std::int64_t>(std::floor(cfg.horizon / dt));
    PathSample out;
    double q = tau;
    for (std::int64_t k = 0; k < steps; ++k) {
        const double q_next = std::max(0.0, q + mu * dt + sd * rng.normal());
        // occupation of [0, tau] with linear interpolation at the crossing
        const bool below_now = q <= tau;
        const bool below_next = q_next <= tau;
        if (below_now && below_next) {
            out.alpha_t += dt;
        } else if (!below_now && !below_next) {
            out.beta_t += dt;
        } else {
            const double frac = std::abs(tau - q) / std::abs(q_next - q);
            if (below_now) {
                out.alpha_t += dt * frac;
                out.beta_t += dt * (1.0 - frac);
            } else {
                out.beta_t += dt * frac;
                out.alpha_t += dt * (1.0 - frac);
            }
        }
        q = q_next;
    }
    // partial last step
    const double rem = cfg.horizon - static_cast<double>(steps) * dt;
    if (rem > 0.0) (q <= tau ? out.alpha_t : out.beta_t) += rem;
    out.in_A_at_t = q <= tau;
    return out;
}

SupremumEpochSample supremum_epoch_sample(double mu, double sigma2, double q, double dt,
                                          Rng& rng) {
    if (!(q > 0.0)) throw InvalidRange("supremum_epoch_sample: q must be > 0");
    if (!(dt > 0.0)) throw InvalidRange("supremum_epoch_sample: dt must be > 0");
    const double horizon = rng.exponential(q);
    const auto n = static_cast<std::int64_t>(std::floor(horizon / dt));
    const double sd = std::sqrt(sigma2 * dt);
    double s = 0.0;
    double best = 0.0;
    std::int64_t best_k = 0;
    std::int64_t below = 0;
    for (std::int64_t k = 1; k <= n; ++k) {
        s += mu * dt + sd * rng.normal();
        if (s > best) {
            best = s;
            best_k = k;
        }
        if (s <= 0.0) ++below;
    }
    SupremumEpochSample out;
    out.residual = static_cast<double>(n - best_k) * dt;
    out.alpha = static_cast<double>(below) * dt;
    return out;
}

double free_bm_occupation_bridge(double mu, double sigma2, double t, double dt, Rng& rng) {
    // Endpoint-exact skeleton; sub-step dips below 0 between two positive
    // endpoints are detected by the Brownian bridge minimum law
    // P(min < 0 | a, b > 0) = exp(-2ab / (sigma2 dt)), and crossing steps
    // use linear interpolation. This keeps the boundary-atom estimate free
    // of the O(sqrt(dt)) mass the plain grid count leaks.
    const auto n = static_cast<std::int64_t>(std::floor(t / dt));
    const double sd = std::sqrt(sigma2 * dt);
    double s = 0.0;
    double alpha = 0.0;
    for (std::int64_t k = 1; k <= n; ++k) {
        const double s_next = s + mu * dt + sd * rng.normal();
        if (s <= 0.0 && s_next <= 0.0) {
            alpha += dt;
            // bridge may pop above 0 (probability 1 from a zero endpoint);
            // the excursion above is credited a nominal quarter step
            const double p_pop = std::exp(-2.0 * s * s_next / (sigma2 * dt));
            if (rng.uniform() < p_pop) alpha -= 0.25 * dt;
        } else if (s > 0.0 && s_next > 0.0) {
            const double p_dip = std::exp(-2.0 * s * s_next / (sigma2 * dt));
            if (rng.uniform() < p_dip) alpha += 0.25 * dt;  // nominal dip credit
        } else {
            const double frac = std::abs(s) / std::abs(s_next - s);
            alpha += s <= 0.0 ? dt * frac : dt * (1.0 - frac);
            if (s == 0.0) alpha += 0.25 * dt;  // start-at-zero bridge dip
        }
        s = s_next;
    }
    alpha += (t - static_cast<double>(n) * dt) * (s <= 0.0 ? 1.0 : 0.0);
    return alpha;
}

// --- empirical statistics ---------------------------------------------------

double empirical_cdf(const std::vector<double>& sorted_samples, double x) {
    if (sorted_samples.empty()) throw EmptySample("empirical_cdf: empty sample");
    const auto it = std::upper_bound(sorted_samples.begin(), sorted_samples.end(), x);
    return static_cast<double>(it - sorted_samples.begin()) /
           static_cast<double>(sorted_samples.size());
}

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
    if (samples.empty()) throw EmptySample("ks_statistic: empty sample");
    std::sort(samples.begin(), samples.end());
    const auto n = static_cast<double>(samples.size());
    double d = 0.0;
    for (size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        d = std::max(d, std::abs((static_cast<double>(i) + 1.0) / n - f));
        d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    }
    return d;
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw EmptySample("ks_two_sample: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    double d = 0.0;
    size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        const double v = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= v) ++i;
        while (j < b.size() && b[j] <= v) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

namespace {

// Q(x) = 2 sum_{k>=1} (-1)^{k-1} e^{-2 k^2 x^2}: Kolmogorov tail.
double kolmogorov_tail(double x) {
    if (x <= 0.0) return 1.0;
    double sum = 0.0;
    double sign = 1.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * x * x);
        sum += sign * term;
        if (term < 1e-16) break;
        sign = -sign;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

double kolmogorov_quantile(double level) {
    double lo = 0.0, hi = 4.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (kolmogorov_tail(mid) > level ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

double ks_critical_value(double level, std::size_t n) {
    return kolmogorov_quantile(level) / std::sqrt(static_cast<double>(n));
}

double ks_two_sample_critical_value(double level, std::size_t n, std::size_t m) {
    const double nn = static_cast<double>(n);
    const double mm = static_cast<double>(m);
    return kolmogorov_quantile(level) * std::sqrt((nn + mm) / (nn * mm));
}

// --- replication driver -------------------------------------------------------

void for_each_replication(std::uint64_t seed, std::int64_t n,
                          const std::function<void(std::int64_t, Rng&)>& body) {
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const auto workers = static_cast<std::int64_t>(std::min<std::uint64_t>(hw, 8));
    if (workers <= 1 || n < 4) {
        for (std::int64_t r = 0; r < n; ++r) {
            Rng rng(seed, static_cast<std::uint64_t>(r));
            body(r, rng);
        }
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (std::int64_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w]() {
            for (std::int64_t r = w; r < n; r += workers) {
                Rng rng(seed, static_cast<std::uint64_t>(r));
                body(r, rng);
            }
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace occt
