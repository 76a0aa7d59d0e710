#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "occt/levy.hpp"
#include "occt/renewal.hpp"
#include "occt/rng.hpp"

namespace occt {

struct SimConfig {
    std::uint64_t seed = 1;
    std::int64_t replications = 1;
    double horizon = 0.0;
    double dt = 1e-4;  // diffusion step
    double tau = 0.0;

    void validate() const;
};

// One completed cycle of the reflected storage process around level tau.
// Upcrossings happen by a jump, so the overshoot is strictly positive.
struct CycleRecord {
    double d = 0.0;         // sojourn in [0, tau]
    double u = 0.0;         // excursion above tau
    double overshoot = 0.0; // Q(tau_alpha) - tau
};

// Exact event-driven path of the compound Poisson storage model Q (unit
// drain, reflection at 0), Q(0) = tau. Occupation of [0, tau] accumulated
// exactly between events; completed cycles reported alongside.
PathSample simulate_storage(const LevyModel& model, const SimConfig& cfg, Rng& rng,
                            std::vector<CycleRecord>* cycles = nullptr);

// Exactly n completed cycles (no horizon bookkeeping).
std::vector<CycleRecord> simulate_storage_cycles(const LevyModel& model, double tau,
                                                 std::int64_t n, Rng& rng);

// Euler-Maruyama reflected Brownian motion with occupation of [0, tau]
// accumulated via sub-step linear interpolation at the boundary crossings.
// Discretization bias is O(sqrt(dt)).
PathSample simulate_rbm(double mu, double sigma2, const SimConfig& cfg, Rng& rng);

// Free Brownian path on [0, e_q], e_q ~ Exp(q): returns the time from the
// (first) supremum epoch to e_q and the occupation of (-infty, 0].
struct SupremumEpochSample {
    double residual = 0.0;  // e_q - G_{e_q}
    double alpha = 0.0;     // occupation of (-infty, 0]
};
SupremumEpochSample supremum_epoch_sample(double mu, double sigma2, double q, double dt,
                                          Rng& rng);

// Occupation of (-infty, 0] for a free Brownian path on [0, t] where
// sub-step excursions below 0 are detected by sampling the bridge-minimum
// law; used to estimate boundary atoms without O(sqrt(dt)) mass leakage.
double free_bm_occupation_bridge(double mu, double sigma2, double t, double dt, Rng& rng);

// --- empirical statistics -------------------------------------------------

double empirical_cdf(const std::vector<double>& sorted_samples, double x);

// sup_x |F_n(x) - F(x)| against a reference CDF.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);

// Two-sample sup distance.
double ks_two_sample(std::vector<double> a, std::vector<double> b);

// Asymptotic Kolmogorov critical values: P(sup |B(F)| > c) = level.
double ks_critical_value(double level, std::size_t n);
double ks_two_sample_critical_value(double level, std::size_t n, std::size_t m);

// --- replication driver -----------------------------------------------------

// Runs body(rep_index, rng) for rep = 0..n-1 over a small thread pool; each
// replication draws from its own (seed, rep) substream and writes results
// into a preallocated slot, so the output is bit-identical for any thread
// count.
void for_each_replication(std::uint64_t seed, std::int64_t n,
                          const std::function<void(std::int64_t, Rng&)>& body);

}  // namespace occt
