#pragma once

#include "occt/sojourn_law.hpp"

namespace occt {

// Large deviations of alpha(t)/t for light-tailed cycle laws.
//
// The cumulant lambda(theta) = lim (1/t) log E e^{theta alpha(t)} equals
// theta d(theta) where the drain rate d(theta) is the unique root of
//   E e^{theta (1 - d) D - theta d U} = 1
// on (alpha/(alpha+beta), 1). The upper-tail rate function is the
// Legendre-Fenchel transform lambda*(q) = sup_theta (theta q - lambda(theta)).

// E e^{aD + bU}; +infinity outside the domain.
double joint_mgf(const SojournLaw& law, double a, double b);

// Root of the drain-rate equation, |E e^{...} - 1| <= 1e-12. Throws NoRoot
// when the MGF domain truncates the bracket before a sign change.
double drain_rate(const SojournLaw& law, double theta);

// lambda(theta) = theta * d(theta); lambda(0) = 0.
double cumulant(const SojournLaw& law, double theta);

// d lambda / d theta, via the stationarity of the root equation; increasing
// in theta, equal to the mean fraction at 0+.
double cumulant_prime(const SojournLaw& law, double theta);

struct RateFunctionResult {
    double value = 0.0;       // lambda*(frac)
    double theta_star = 0.0;  // maximizer
    double drain = 0.0;       // d(theta_star)
    bool boundary = false;    // maximizer hit the MGF domain edge
};

// lambda*(frac) for frac in (mean fraction, 1); returns 0 at the mean
// fraction. The lower tail is exposed through rate_function_lower, which
// swaps the roles of D and U.
RateFunctionResult rate_function(const SojournLaw& law, double frac);
RateFunctionResult rate_function_lower(const SojournLaw& law, double frac);

// exp(-t lambda*(frac)): the logarithmic-scale tail asymptote for
// P(alpha(t)/t > frac) (not an exact probability).
double tail_asymptotic(const SojournLaw& law, double frac, double t);

}  // namespace occt
