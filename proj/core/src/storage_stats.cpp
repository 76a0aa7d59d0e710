#include "occt/storage_stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "occt/errors.hpp"
#include "occt/renewal.hpp"
#include "occt/transforms.hpp"

namespace occt::storage {

namespace {

using Cplx = std::complex<double>;

template <typename S>
S joint_transform_impl(const ScaleEvaluator& scale, double tau, S th1, S th2);

// Real specialization goes through the generalized tilt (handles negative
// th1 for the MGF continuation).
template <>
double joint_transform_impl<double>(const ScaleEvaluator& scale, double tau, double th1,
                                    double th2) {
    const double p = th1 - th2;
    const auto t = scale.tilted_at_rate(th2, p, tau);
    const double rate = scale.model().psi(th2);
    const double denom = t.W_prime + rate * t.W;
    return (t.W_prime + (rate - p) * t.W - rate * t.Z) / denom;
}

template <>
Cplx joint_transform_impl<Cplx>(const ScaleEvaluator& scale, double tau, Cplx th1, Cplx th2) {
    const Cplx p = th1 - th2;
    const Cplx rate = scale.model().psi(th2);
    const Cplx w = scale.W(th1, tau);
    const Cplx wp = scale.W_prime(th1, tau);
    const Cplx damp = std::exp(-rate * tau);
    const Cplx w_t = damp * w;
    const Cplx wp_t = damp * (wp - rate * w);
    const Cplx z_t = Cplx(1.0) + p * scale.integral_W(th1, rate, tau);
    return (wp_t + (rate - p) * w_t - rate * z_t) / (wp_t + rate * w_t);
}

}  // namespace

std::pair<double, double> sojourn_means(const ScaleEvaluator& scale, double tau) {
    if (!(tau > 0.0) && scale.model().kind() == LevyModel::Kind::brownian)
        throw DegenerateLevel("sojourn_means: tau = 0 gives a degenerate Brownian cycle");
    if (!scale.model().stable()) throw UnstableModel("sojourn_means: E X(1) must be < 0");
    const double w = scale.W(0.0, tau);
    const double wp = scale.W_prime(0.0, tau);
    const double psi1 = scale.model().psi_prime0();
    if (!(wp > 0.0)) throw DegenerateLevel("sojourn_means: W'(tau) must be > 0");
    const double ed = w / wp;
    const double eu = (psi1 - w) / wp;
    if (!(ed > 0.0) || !(eu > 0.0))
        throw DegenerateLevel("sojourn_means: non-positive mean signals invalid model/tau");
    return {ed, eu};
}

double sojourn_joint_transform(const ScaleEvaluator& scale, double tau, double th1, double th2) {
    if (th2 < scale.model().phi_min())
        throw DomainBoundary("sojourn_joint_transform: th2 below phi_min");
    return joint_transform_impl<double>(scale, tau, th1, th2);
}

Cplx sojourn_joint_transform(const ScaleEvaluator& scale, double tau, Cplx th1, Cplx th2) {
    return joint_transform_impl<Cplx>(scale, tau, th1, th2);
}

SojournStats sojourn_moments(const ScaleEvaluator& scale, double tau) {
    const auto [ed, eu] = sojourn_means(scale, tau);
    const auto& model = scale.model();
    const double w = scale.W(0.0, tau);
    const double wp = scale.W_prime(0.0, tau);
    const double ww = scale.selfconv(0.0, tau);
    const double wwp = scale.selfconv_prime(0.0, tau);
    const double int_w = scale.integral_W(0.0, 0.0, tau);
    const double psi1 = model.psi_prime0();
    const double psi2 = model.psi_double_prime0();

    // var D = -2 (W*W)/W' + W (2 (W*W)' - W) / W'^2
    const double var_d = -2.0 * ww / wp + w * (2.0 * wwp - w) / (wp * wp);

    // var U, closed form as printed (known misprint risk in the grouping of
    // the 1/W' factors):
    const double var_u_closed =
        (2.0 * psi1 / wp) * (int_w + w / wp) -
        (1.0 / wp) * (psi2 + 2.0 * psi1 * psi1 * tau + psi1 / wp + w * w / wp);

    // transform arbiter: E U^2 from the second derivative of the joint
    // transform in th2 at 0 (Richardson-extrapolated central differences).
    auto lu = [&](double th) { return joint_transform_impl<double>(scale, tau, 0.0, th); };
    auto second_diff = [&](double h) { return (lu(h) - 2.0 + lu(-h)) / (h * h); };
    // step kept inside the continuation strip (-phi_min is the MGF edge)
    const double h0 =
        std::min(1e-3 * std::max(1.0, 1.0 / eu), -0.25 * model.phi_min());
    const double d2_h = second_diff(h0);
    const double d2_h2 = second_diff(0.5 * h0);
    const double eu2 = (4.0 * d2_h2 - d2_h) / 3.0;
    const double var_u_fd = eu2 - eu * eu;

    // cov = (psi'(0) - W) ((W*W)' - W) / W'^2 + (W*W)/W' - psi'(0) int W / W'
    const double cov = (psi1 - w) * (wwp - w) / (wp * wp) + ww / wp - psi1 * int_w / wp;

    SojournStats out;
    out.var_U_closed_form = var_u_closed;
    out.var_U_transform = var_u_fd;
    const double rel =
        std::abs(var_u_closed - var_u_fd) / std::max(1e-12, std::abs(var_u_fd));
    out.disagreement = rel > 1e-3;
    const double var_u = out.disagreement ? var_u_fd : var_u_closed;
    out.summary = MomentSummary::from_moments(ed, eu, var_d, var_u, cov);
    out.summary.var_U_from_transform = out.disagreement;
    return out;
}

double occupation_double_transform(const ScaleEvaluator& scale, double tau, double theta,
                                   double q) {
    if (!(q > 0.0)) throw InvalidRange("occupation_double_transform: q must be > 0");
    if (theta < 0.0) throw InvalidRange("occupation_double_transform: theta must be >= 0");
    if (tau < 0.0) throw InvalidRange("occupation_double_transform: tau must be >= 0");
    if (theta == 0.0) return 1.0 / q;
    const auto t = scale.tilted(q, theta, tau);
    const double psi_q = scale.model().psi(q);
    return psi_q * t.Z / (q * (theta * t.W + psi_q * t.Z));
}

Cplx occupation_double_transform(const ScaleEvaluator& scale, double tau, Cplx theta, Cplx q) {
    const Cplx psi_q = scale.model().psi(q);
    const Cplx w = scale.W(q + theta, tau);
    const Cplx damp = std::exp(-psi_q * tau);
    const Cplx w_t = damp * w;
    const Cplx z_t = Cplx(1.0) + theta * scale.integral_W(q + theta, psi_q, tau);
    return psi_q * z_t / (q * (theta * w_t + psi_q * z_t));
}

double free_occupation_double_transform(const LevyModel& model, double theta, double q) {
    if (!(q > 0.0)) throw InvalidRange("free_occupation_double_transform: q must be > 0");
    if (theta < 0.0)
        throw InvalidRange("free_occupation_double_transform: theta must be >= 0");
    if (!model.stable())
        throw UnstableModel("free_occupation_double_transform: E X(1) must be < 0");
    return model.psi(q) / (q * model.psi(q + theta));
}

namespace {

// Shared evaluation of the reflected-Brownian double transform. With
// D(z) = 2 sigma2 z + mu^2, Delta = D(q + theta) and psi(q) the inverse of
// the Laplace exponent, the transform equals
//   (1/q) [ 1 - 2 theta sigma2 sinh(sqrt(Delta) tau / sigma2)
//           / ( (Delta + mu sqrt(D(q))) sinh(...) +
//               sigma2 psi(q) sqrt(Delta) cosh(...) ) ].
// The sign of the mu sqrt(D(q)) term follows the E X(1) = mu convention:
// it is the unique choice consistent with the general reflected-process
// transform and with the tau -> infinity limit psi(q)/psi(q+theta).
template <typename S>
S rbm_impl(double mu, double sigma2, double tau, S theta, S q) {
    const S dq = 2.0 * sigma2 * q + mu * mu;
    const S delta = dq + 2.0 * sigma2 * theta;
    const S sqrt_dq = std::sqrt(dq);
    const S sqrt_delta = std::sqrt(delta);
    const S psi_q = (mu + sqrt_dq) / sigma2;
    const S arg = sqrt_delta * tau / sigma2;
    const S sh = std::sinh(arg);
    const S ch = std::cosh(arg);
    const S denom = (delta + mu * sqrt_dq) * sh + sigma2 * psi_q * sqrt_delta * ch;
    return (S(1.0) - 2.0 * theta * sigma2 * sh / denom) / q;
}

}  // namespace

double rbm_double_transform(double mu, double sigma2, double tau, double theta, double q) {
    if (!(sigma2 > 0.0)) throw InvalidRange("rbm_double_transform: sigma2 must be > 0");
    if (!(q > 0.0)) throw InvalidRange("rbm_double_transform: q must be > 0");
    if (theta < 0.0 || tau < 0.0)
        throw InvalidRange("rbm_double_transform: theta and tau must be >= 0");
    return rbm_impl<double>(mu, sigma2, tau, theta, q);
}

Cplx rbm_double_transform(double mu, double sigma2, double tau, Cplx theta, Cplx q) {
    return rbm_impl<Cplx>(mu, sigma2, tau, theta, q);
}

double bm_free_occupation_density(double mu, double t, double u) {
    if (!(u > 0.0) || !(u < t))
        throw InvalidRange("bm_free_occupation_density: need 0 < u < t");
    // Occupation of (-infty, 0] for X(s) = mu s + B(s), unit variance, with
    // m = -mu the downward drift. Inverting (1/q) psi(q)/psi(q+theta) in
    // both variables factorizes the joint law of (time below, time above)
    // over the wedge, giving the product density
    //   f_t(u) = a(u) b(t - u),
    //   a(u) = e^{-m^2 u/2} / sqrt(2 pi u) + m Phi(m sqrt(u)),
    //   b(v) = sqrt(2/pi) e^{-m^2 v/2} / sqrt(v) - 2 m Phi(-m sqrt(v)).
    // m = 0 collapses to the arcsine density 1/(pi sqrt(u (t-u))).
    const double m = -mu;
    const double below =
        std::exp(-0.5 * m * m * u) / std::sqrt(2.0 * std::numbers::pi * u) +
        m * std_normal_cdf(m * std::sqrt(u));
    const double v = t - u;
    const double above =
        std::sqrt(2.0 / std::numbers::pi) * std::exp(-0.5 * m * m * v) / std::sqrt(v) -
        2.0 * m * std_normal_cdf(-m * std::sqrt(v));
    return below * above;
}

InversionResult occupation_cdf(const ScaleEvaluator& scale, double tau, double t, double x,
                               const InversionConfig& cfg) {
    // The atom of alpha(t) at t (no upcrossing of tau by the horizon) has
    // double transform (1 - L1(q+theta))/(q+theta) with
    // 1 - L1(s) = s W^{(s)}(tau)/W^{(s)'}(tau); subtracting it leaves the
    // continuous part for a ringing-free inversion.
    DoubleTransformFn source = [&scale, tau](Cplx theta, Cplx q) {
        const Cplx s = q + theta;
        const Cplx atom = scale.W(s, tau) / scale.W_prime(s, tau);
        return occupation_double_transform(scale, tau, theta, q) - atom;
    };
    return occupation_cdf_via_inversion(source, t, x, cfg);
}

}  // namespace occt::storage
