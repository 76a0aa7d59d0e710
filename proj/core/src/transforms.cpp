#include "occt/transforms.hpp"

#include <algorithm>
#include <cmath>

#include "occt/errors.hpp"

namespace occt {

namespace {

using Cplx = std::complex<double>;

Cplx double_transform_impl(const SojournLaw& law, Cplx theta, Cplx q) {
    const Cplx l1 = law.L1(q + theta);
    const Cplx l12 = law.L12(q + theta, q);
    const Cplx denom = Cplx(1.0) - l12;
    return ((Cplx(1.0) - l1) / (q + theta) + (l1 - l12) / q) / denom;
}

}  // namespace

double alpha_double_transform(const SojournLaw& law, double theta, double q) {
    if (!(q > 0.0)) throw InvalidRange("alpha_double_transform: q must be > 0");
    if (theta < 0.0) throw InvalidRange("alpha_double_transform: theta must be >= 0");
    const double l12 = law.L12(Cplx(q + theta), Cplx(q)).real();
    if (l12 >= 1.0)
        throw DivergentTransform(
            "alpha_double_transform: L12(q+theta, q) >= 1 for q > 0 signals a broken law");
    return double_transform_impl(law, Cplx(theta), Cplx(q)).real();
}

Cplx alpha_double_transform(const SojournLaw& law, Cplx theta, Cplx q) {
    return double_transform_impl(law, theta, q);
}

std::pair<double, double> alpha_transform_split(const SojournLaw& law, double theta, double q) {
    const Cplx l1 = law.L1(Cplx(q + theta));
    const Cplx l12 = law.L12(Cplx(q + theta), Cplx(q));
    const double denom = (Cplx(1.0) - l12).real();
    const double k1 = q / (q + theta) * (1.0 - l1.real()) / denom;
    const double k2 = (l1.real() - l12.real()) / denom;
    return {k1, k2};
}

std::pair<double, double> availability_transforms(const SojournLaw& law, double q) {
    if (!(q > 0.0)) throw InvalidRange("availability_transforms: q must be > 0");
    const double l1 = law.L1(Cplx(q)).real();
    const double l12 = law.L12(Cplx(q), Cplx(q)).real();
    if (l12 >= 1.0)
        throw DivergentTransform("availability_transforms: L12(q, q) >= 1");
    const double denom = 1.0 - l12;
    return {(1.0 - l1) / (q * denom), (l1 - l12) / (q * denom)};
}

InversionResult availability_at(const SojournLaw& law, double t, const InversionConfig& cfg) {
    if (!(t > 0.0)) throw InvalidRange("availability_at: t must be > 0");
    TransformFn fhat = [&law](Cplx q) {
        const Cplx l1 = law.L1(q);
        const Cplx l12 = law.L12(q, q);
        return (Cplx(1.0) - l1) / (q * (Cplx(1.0) - l12));
    };
    auto res = invert(fhat, t, cfg);
    res.value = std::clamp(res.value, 0.0, 1.0);
    return res;
}

InversionResult occupation_cdf_via_inversion(const DoubleTransformFn& source, double t, double x,
                                             const InversionConfig& cfg) {
    if (!(t > 0.0)) throw InvalidRange("occupation_cdf_via_inversion: t must be > 0");
    if (x < 0.0 || x > t)
        throw InvalidRange("occupation_cdf_via_inversion: x must lie in [0, t]");
    InversionResult res;
    if (x == 0.0) {
        // alpha(t) > 0 a.s. for processes started in A
        res.value = 0.0;
        return res;
    }
    if (x >= t) {
        res.value = 1.0;  // alpha(t) <= t a.s.; the transform rings at the atom
        return res;
    }
    // Iterated Euler: the inner inversion in q at fixed (complex) theta
    // recovers g_t(theta) = E e^{-theta alpha(t)}; the outer pass inverts
    // g_t(theta)/theta at x. The outer prefactor amplifies inner errors, so
    // the inner pass runs at a tighter tolerance.
    // The CDF originals carry square-root singularities at the endpoints;
    // their alternating Bromwich series converge slowly, so the iterated
    // pass needs more terms and a higher acceleration order than a single
    // smooth inversion.
    InversionConfig inner_cfg = cfg;
    inner_cfg.algorithm = InversionAlgorithm::euler_summation;
    inner_cfg.terms = std::max(cfg.terms, 121);
    inner_cfg.euler_order = std::max(cfg.euler_order, 20);
    inner_cfg.target_abs_tol = std::min(cfg.target_abs_tol, 1e-10);
    bool inner_ok = true;
    double inner_err = 0.0;
    auto g_t = [&](Cplx theta) -> Cplx {
        TransformFn in_q = [&](Cplx q) { return source(theta, q); };
        const auto inner = invert_complex(in_q, t, inner_cfg);
        inner_ok = inner_ok && inner.accuracy_reached;
        inner_err = std::max(inner_err, inner.abs_error_estimate);
        return inner.value;
    };
    TransformFn outer = [&](Cplx theta) { return g_t(theta) / theta; };
    InversionConfig outer_cfg = inner_cfg;
    outer_cfg.target_abs_tol = cfg.target_abs_tol;
    auto out = invert(outer, x, outer_cfg);
    res.value = std::clamp(out.value, 0.0, 1.0);
    res.abs_error_estimate = out.abs_error_estimate + inner_err;
    res.accuracy_reached = out.accuracy_reached && inner_ok;
    return res;
}

InversionResult occupation_cdf_from_law(const SojournLaw& law, double t, double x,
                                        const InversionConfig& cfg) {
    // alpha(t) has an atom at t of mass 1 - F(t) (the first sojourn covers
    // the horizon); its double transform is the (1 - L1(q+theta))/(q+theta)
    // summand. Subtracting it leaves the continuous part, which inverts
    // without ringing; for x < t the atom contributes nothing to the CDF.
    DoubleTransformFn source = [&law](Cplx theta, Cplx q) {
        return alpha_double_transform(law, theta, q) -
               (Cplx(1.0) - law.L1(q + theta)) / (q + theta);
    };
    return occupation_cdf_via_inversion(source, t, x, cfg);
}

}  // namespace occt
