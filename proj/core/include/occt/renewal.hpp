#pragma once

#include <utility>
#include <vector>

#include "occt/rng.hpp"
#include "occt/sojourn_law.hpp"

namespace occt {

// Occupation bookkeeping of one simulated path on [0, t]. The process
// starts in A with a full first sojourn D_1; alpha_t + beta_t = t.
struct PathSample {
    double alpha_t = 0.0;
    double beta_t = 0.0;
    bool in_A_at_t = true;
    std::vector<std::pair<double, double>> cycle_pairs;  // filled on request
};

// Alternates D_1, U_1, D_2, ... until the horizon, truncating the final
// interval. record_cycles controls whether completed pairs are stored.
PathSample simulate_alternating(const SojournLaw& law, double t, Rng& rng,
                                bool record_cycles = false);

// Controls for the series evaluation of the exact occupation CDFs.
struct LatticeConfig {
    double h = 0.0;        // lattice step; 0 selects min(E D, E U) / 50
    double tol = 1e-4;     // series truncation tolerance
    int max_terms = 10000;
    double disc_tol = 0.0;      // if > 0, enforce the discretization estimate
    bool force_bivariate = false;  // skip the independent-product fast path
    int empirical_samples = 200000;
};

struct SeriesCdf {
    double value = 0.0;
    double error_estimate = 0.0;  // series tail bound + lattice h-refinement
    int terms = 0;

    operator double() const { return value; }
};

// P(beta(t) <= x): partial-sum series
//   sum_n [ P(Y_n <= x, X_n < t-x) - P(Y_n <= x, X_{n+1} < t-x) ]
// evaluated with iterated bivariate lattice convolutions (independent laws
// factorize into the marginal convolution form unless force_bivariate).
SeriesCdf exact_cdf_beta(const SojournLaw& law, double t, double x,
                         const LatticeConfig& grid = {});

// P(alpha(t) < x) = F(x) - sum_{n>=1} [ P(Y_n <= t-x, X_n < x)
//                                       - P(Y_n <= t-x, X_{n+1} < x) ].
SeriesCdf exact_cdf_alpha(const SojournLaw& law, double t, double x,
                          const LatticeConfig& grid = {});

// Moment summary of the cycle law (delegates per kind; storage-induced laws
// go through the scale-function expressions).
MomentSummary moments(const SojournLaw& law);

// Gaussian approximation Phi((x - alpha t/(alpha+beta)) / sqrt(C t)) to
// P(alpha(t) <= x).
double normal_approx_cdf(const MomentSummary& ms, double t, double x);

// Standard normal CDF (shared little helper).
double std_normal_cdf(double x);

}  // namespace occt
