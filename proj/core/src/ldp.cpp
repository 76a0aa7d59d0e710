#include "occt/ldp.hpp"

#include <cmath>
#include <limits>

#include "occt/errors.hpp"

namespace occt {

namespace {

// G(d) = E e^{theta(1-d) D - theta d U} - 1; strictly decreasing in d with
// G > 0 at the mean fraction (Jensen) and G < 0 at 1-.
double root_equation(const SojournLaw& law, double theta, double d) {
    return law.joint_mgf(theta * (1.0 - d), -theta * d) - 1.0;
}

}  // namespace

double joint_mgf(const SojournLaw& law, double a, double b) { return law.joint_mgf(a, b); }

double drain_rate(const SojournLaw& law, double theta) {
    if (!(theta > 0.0)) throw InvalidRange("drain_rate: theta must be > 0");
    const auto ms = law.moments();
    const double mean_frac = ms.mean_fraction();
    const auto dom = law.mgf_domain();
    if (!(dom.sup_a > 0.0) || !(dom.sup_b > 0.0))
        throw DomainBoundary("drain_rate: law is not light-tailed");

    const double eps = 1e-9;
    double hi = 1.0 - eps;
    const double g_hi = root_equation(law, theta, hi);
    if (!(g_hi < 0.0)) throw NoRoot("drain_rate: no sign change at the right endpoint");

    // G is decreasing with G = +infinity (or >= 0 by Jensen) toward the
    // mean fraction. Find a finite left endpoint, shrinking geometrically
    // while the MGF is infinite (theta (1-d) can exceed the D-domain).
    double lo = mean_frac;
    double probe = mean_frac + eps;
    double g_probe = root_equation(law, theta, probe);
    int guard = 0;
    while (!std::isfinite(g_probe)) {
        lo = probe;
        probe += 0.5 * (hi - probe);
        g_probe = root_equation(law, theta, probe);
        if (++guard > 200)
            throw NoRoot("drain_rate: MGF domain truncates the bracket before a sign change");
    }
    if (g_probe >= 0.0)
        lo = probe;  // regular bracket [probe, hi]
    else
        hi = probe;  // root in (lo, probe]; lo side counts as positive

    // Bisection treating non-finite values as the positive side. Converge
    // the argument as well as the residual: near theta = 0 the equation is
    // flat and |G| alone under-determines d.
    double d = 0.5 * (lo + hi);
    for (int i = 0; i < 300; ++i) {
        const double gd = root_equation(law, theta, d);
        if (std::isfinite(gd) && std::abs(gd) <= 1e-12 &&
            hi - lo <= 1e-11 * std::max(1.0, std::abs(d)))
            return d;
        if (!std::isfinite(gd) || gd > 0.0)
            lo = d;
        else
            hi = d;
        d = 0.5 * (lo + hi);
        if (hi - lo < 1e-17) break;
    }
    const double res = root_equation(law, theta, d);
    if (!std::isfinite(res) || std::abs(res) > 1e-12)
        throw NoRoot("drain_rate: root certificate failed");
    return d;
}

double cumulant(const SojournLaw& law, double theta) {
    if (theta == 0.0) return 0.0;
    if (theta < 0.0) throw InvalidRange("cumulant: theta must be >= 0");
    try {
        return theta * drain_rate(law, theta);
    } catch (const NoRoot&) {
        throw DomainBoundary("cumulant: theta beyond the effective domain");
    }
}

double cumulant_prime(const SojournLaw& law, double theta) {
    // lambda'(theta) = K_a / (K_a + K_b) at the root, where K = log joint
    // MGF and the subscripts are partials at (theta(1-d), -theta d); the
    // partials are stable central differences of K because E e^{S} = 1 at
    // the root.
    const double d = drain_rate(law, theta);
    const double a = theta * (1.0 - d);
    const double b = -theta * d;
    const double h = 1e-6 * std::max(1.0, theta);
    auto K = [&](double aa, double bb) { return std::log(law.joint_mgf(aa, bb)); };
    const double ka = (K(a + h, b) - K(a - h, b)) / (2.0 * h);
    const double kb = (K(a, b + h) - K(a, b - h)) / (2.0 * h);
    return ka / (ka + kb);
}

RateFunctionResult rate_function(const SojournLaw& law, double frac) {
    const auto ms = law.moments();
    const double mean_frac = ms.mean_fraction();
    RateFunctionResult out;
    if (std::abs(frac - mean_frac) <= 1e-14) return out;  // lambda*(mean) = 0
    if (frac < mean_frac || frac >= 1.0)
        throw InvalidRange("rate_function: frac must lie in [mean fraction, 1)");

    // lambda' is increasing with lambda'(0+) = mean fraction; solve
    // lambda'(theta*) = frac on an expanding bracket.
    double lo = 0.0, hi = 1.0;
    double lp_hi;
    int expansions = 0;
    while (true) {
        try {
            lp_hi = cumulant_prime(law, hi);
        } catch (const NoRoot&) {
            // theta beyond the domain: treat as boundary supremum
            out.boundary = true;
            hi *= 0.5;
            break;
        } catch (const DomainBoundary&) {
            out.boundary = true;
            hi *= 0.5;
            break;
        }
        if (lp_hi >= frac) break;
        lo = hi;
        hi *= 2.0;
        if (++expansions > 200) {
            out.boundary = true;
            break;
        }
    }
    double theta = hi;
    if (!out.boundary) {
        // bisection on the derivative condition
        for (int i = 0; i < 200; ++i) {
            theta = 0.5 * (lo + hi);
            const double lp = cumulant_prime(law, theta);
            if (std::abs(lp - frac) < 1e-12) break;
            (lp < frac ? lo : hi) = theta;
            if (hi - lo < 1e-13 * std::max(1.0, hi)) break;
        }
        theta = 0.5 * (lo + hi);
    }
    const double d = drain_rate(law, theta);
    out.theta_star = theta;
    out.drain = d;
    out.value = theta * frac - theta * d;
    if (out.value < 0.0) out.value = 0.0;
    return out;
}

RateFunctionResult rate_function_lower(const SojournLaw& law, double frac) {
    // P(alpha/t < frac) = P(beta_swapped/t > 1 - frac) with D and U roles
    // exchanged.
    return rate_function(law.swapped(), 1.0 - frac);
}

double tail_asymptotic(const SojournLaw& law, double frac, double t) {
    if (!(t > 0.0)) throw InvalidRange("tail_asymptotic: t must be > 0");
    const auto ms = law.moments();
    if (std::abs(frac - ms.mean_fraction()) <= 1e-14) return 1.0;
    return std::exp(-t * rate_function(law, frac).value);
}

}  // namespace occt
