#include "occt/scale.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "occt/errors.hpp"

namespace occt {

namespace {

using Cplx = std::complex<double>;
using boost::math::quadrature::gauss_kronrod;

// (e^{a x} - 1) / a, stable near a = 0.
template <typename S>
S expm1_over(S a, double x) {
    const S ax = a * x;
    if (std::abs(ax) < 1e-5) {
        return S(x) * (S(1.0) + ax * 0.5 * (S(1.0) + ax / 3.0 * (S(1.0) + ax * 0.25)));
    }
    return (std::exp(ax) - S(1.0)) / a;
}

// sinh(z)/z with the removable singularity filled in.
template <typename S>
S sinhc(S z) {
    if (std::abs(z) < 1e-5) {
        const S z2 = z * z;
        return S(1.0) + z2 / 6.0 * (S(1.0) + z2 / 20.0);
    }
    return std::sinh(z) / z;
}

// Two-exponential representation W^{(q)}(x) = A+ e^{r+ x} + A- e^{r- x}
// from the partial fractions of (mu_J + th) / (th^2 + (mu_J - lambda - q) th
// - q mu_J). Valid (with complex-conjugate roots) for any q above phi_min.
struct TwoExp {
    Cplx r_plus, r_minus, a_plus, a_minus;
};

TwoExp cp_exp_partial_fractions(const LevyModel::CpExpDrift& m, Cplx q) {
    const double muj = m.jump_rate;
    const Cplx b = Cplx(muj - m.lambda) - q;
    const Cplx disc = b * b + 4.0 * q * muj;
    const Cplx sq = std::sqrt(disc);
    TwoExp t;
    t.r_plus = 0.5 * (-b + sq);
    t.r_minus = 0.5 * (-b - sq);
    const Cplx dr = t.r_plus - t.r_minus;
    t.a_plus = (muj + t.r_plus) / dr;
    t.a_minus = -(muj + t.r_minus) / dr;
    return t;
}

template <typename S>
struct BrownianW {
    // W^{(q)}(x) = (2x / sigma2) e^{m x} sinhc(b x),  m = mu/sigma2,
    // b = sqrt(mu^2 + 2 sigma2 q)/sigma2.
    S m, b;
    double sigma2;
};

template <typename S>
BrownianW<S> brownian_params(const LevyModel::Brownian& br, S q) {
    BrownianW<S> p;
    p.sigma2 = br.sigma2;
    p.m = S(br.mu / br.sigma2);
    const S delta = S(br.mu * br.mu) + 2.0 * br.sigma2 * q;
    p.b = std::sqrt(delta) / br.sigma2;  // principal branch
    return p;
}

template <typename S>
S brownian_W(const LevyModel::Brownian& br, S q, double x) {
    const auto p = brownian_params(br, q);
    // (2/sqrt(delta)) e^{mx} sinh(bx) written through sinhc to survive q -> q*
    // with delta -> 0.
    return (2.0 * x / br.sigma2) * std::exp(p.m * x) * sinhc(p.b * x);
}

template <typename S>
S brownian_W_prime(const LevyModel::Brownian& br, S q, double x) {
    const auto p = brownian_params(br, q);
    const S ex = std::exp(p.m * x);
    // d/dx [ (2/(sigma2 b)) e^{mx} sinh(bx) ]
    //   = (2/sigma2) e^{mx} [ (m/b) sinh(bx) + cosh(bx) ]
    const S bx = p.b * x;
    const S sinh_over_b = S(x) * sinhc(bx);  // sinh(bx)/b
    return (2.0 / br.sigma2) * ex * (p.m * sinh_over_b + std::cosh(bx));
}

template <typename S>
S brownian_integral_W(const LevyModel::Brownian& br, S q, S c, double x) {
    const auto p = brownian_params(br, q);
    // (1/(sigma2 b)) [ E(m - c + b, x) - E(m - c - b, x) ],  E(a,x) = (e^{ax}-1)/a.
    const S a1 = p.m - c + p.b;
    const S a2 = p.m - c - p.b;
    const S b_safe = p.b;
    if (std::abs(b_safe) * x < 1e-7) {
        // delta ~ 0: W ~ (2x/sigma2) e^{mx}; integrate directly by parts.
        // integral e^{(m-c)y} (2y/sigma2) dy
        const S a = p.m - c;
        if (std::abs(a) * x < 1e-7) return S(x * x / br.sigma2);
        const S eax = std::exp(a * x);
        return (2.0 / br.sigma2) * ((S(x) * eax - expm1_over(a, x)) / a);
    }
    return (expm1_over(a1, x) - expm1_over(a2, x)) / (br.sigma2 * b_safe);
}

template <typename S>
S cp_exp_W(const LevyModel::CpExpDrift& m, S q, double x);

template <>
Cplx cp_exp_W<Cplx>(const LevyModel::CpExpDrift& m, Cplx q, double x) {
    const auto t = cp_exp_partial_fractions(m, q);
    return t.a_plus * std::exp(t.r_plus * x) + t.a_minus * std::exp(t.r_minus * x);
}

template <>
double cp_exp_W<double>(const LevyModel::CpExpDrift& m, double q, double x) {
    return cp_exp_W<Cplx>(m, Cplx(q), x).real();
}

Cplx cp_exp_W_prime_c(const LevyModel::CpExpDrift& m, Cplx q, double x) {
    const auto t = cp_exp_partial_fractions(m, q);
    return t.a_plus * t.r_plus * std::exp(t.r_plus * x) +
           t.a_minus * t.r_minus * std::exp(t.r_minus * x);
}

Cplx cp_exp_integral_W_c(const LevyModel::CpExpDrift& m, Cplx q, Cplx c, double x) {
    const auto t = cp_exp_partial_fractions(m, q);
    return t.a_plus * expm1_over(t.r_plus - c, x) + t.a_minus * expm1_over(t.r_minus - c, x);
}

}  // namespace

// ---------------------------------------------------------------------------
// Phase-type kind: W through numerical transform inversion, cached per q on a
// uniform x-grid, Catmull-Rom interpolation in between.
// ---------------------------------------------------------------------------

struct ScaleEvaluator::PhaseTypeCache {
    double q = 0.0;
    double shift = 0.0;     // c0 > psi(q): h(x) = e^{-c0 x} W(x) decays
    double step = 0.0;
    double psi_q = 0.0;
    double asym_coef = 0.0;  // lim e^{-psi(q) x} W(x) = 1/phi'(psi(q))
    std::vector<double> h;   // h(k * step)

    double x_max() const { return step * (static_cast<double>(h.size()) - 1.0); }
};

ScaleEvaluator::ScaleEvaluator(LevyModel model, InversionConfig inv_cfg)
    : model_(std::move(model)), inv_cfg_(inv_cfg) {
    inv_cfg_.target_abs_tol = std::min(inv_cfg_.target_abs_tol, 1e-10);
}

bool ScaleEvaluator::closed_form() const {
    return model_.kind() != LevyModel::Kind::cp_phase_type_drift;
}

double ScaleEvaluator::W_numeric(double q, double x) const {
    if (x == 0.0) return 1.0;  // unit drift
    constexpr double kGridLimit = 60.0;
    std::shared_ptr<PhaseTypeCache> cache;
    {
        std::lock_guard<std::mutex> lock(cache_mutex_);
        auto it = cache_.find(q);
        if (it != cache_.end() && (it->second->x_max() >= x || it->second->x_max() >= kGridLimit))
            cache = it->second;
    }
    if (!cache) {
        auto fresh = std::make_shared<PhaseTypeCache>();
        fresh->q = q;
        fresh->psi_q = model_.psi(q);
        // Shift by psi(q) exactly: the cached original e^{-psi(q) x} W(x) is
        // bounded, so the absolute inversion error stays a relative error of
        // W after the e^{psi(q) x} blow-back. (The shifted transform has its
        // pole at 0, which the Euler contour clears.)
        fresh->shift = fresh->psi_q;
        fresh->asym_coef = 1.0 / model_.phi_prime(fresh->psi_q);
        const double span = std::min(std::max(2.0 * x, 1.0), kGridLimit);
        fresh->step = 0.01;
        const auto points = static_cast<size_t>(std::ceil(span / fresh->step)) + 1;
        fresh->h.resize(points);
        const double c0 = fresh->shift;
        TransformFn fhat = [this, q, c0](Cplx s) { return 1.0 / (model_.phi(s + c0) - q); };
        fresh->h[0] = 1.0;  // W(0) = 1/drift = 1
        for (size_t k = 1; k < fresh->h.size(); ++k) {
            fresh->h[k] = invert(fhat, fresh->step * static_cast<double>(k), inv_cfg_).value;
        }
        std::lock_guard<std::mutex> lock(cache_mutex_);
        cache_[q] = fresh;
        cache = fresh;
    }
    if (x > cache->x_max()) {
        // Beyond the grid the subdominant transform poles have decayed:
        // W(x) = e^{psi(q) x} / phi'(psi(q)) to spectral-gap accuracy.
        return cache->asym_coef * std::exp(cache->psi_q * x);
    }
    // Catmull-Rom on the uniform grid.
    const double u = x / cache->step;
    const auto n = static_cast<long>(cache->h.size());
    long i = static_cast<long>(u);
    i = std::max(1L, std::min(i, n - 3));
    const double f = u - static_cast<double>(i);
    const double p0 = cache->h[static_cast<size_t>(i - 1)];
    const double p1 = cache->h[static_cast<size_t>(i)];
    const double p2 = cache->h[static_cast<size_t>(i + 1)];
    const double p3 = cache->h[static_cast<size_t>(i + 2)];
    const double hval =
        p1 + 0.5 * f *
                 (p2 - p0 +
                  f * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3 + f * (3.0 * (p1 - p2) + p3 - p0)));
    return hval * std::exp(cache->shift * x);
}

double ScaleEvaluator::integral_W_numeric(double q, double c, double x) const {
    double err = 0.0;
    auto f = [&](double y) { return std::exp(-c * y) * W_numeric(q, y); };
    return gauss_kronrod<double, 15>::integrate(f, 0.0, x, 12, 1e-12, &err);
}

// ---------------------------------------------------------------------------

double ScaleEvaluator::W(double q, double x) const {
    if (x < 0.0) return 0.0;
    switch (model_.kind()) {
        case LevyModel::Kind::brownian:
            return brownian_W<Cplx>(model_.as_brownian(), Cplx(q), x).real();
        case LevyModel::Kind::cp_exp_drift:
            return cp_exp_W<double>(model_.as_cp_exp(), q, x);
        default:
            return W_numeric(q, x);
    }
}

Cplx ScaleEvaluator::W(Cplx q, double x) const {
    if (x < 0.0) return {};
    switch (model_.kind()) {
        case LevyModel::Kind::brownian:
            return brownian_W<Cplx>(model_.as_brownian(), q, x);
        case LevyModel::Kind::cp_exp_drift:
            return cp_exp_W<Cplx>(model_.as_cp_exp(), q, x);
        default:
            throw UnsupportedKind("ScaleEvaluator: complex scale index needs a closed form");
    }
}

double ScaleEvaluator::W_prime(double q, double x) const {
    switch (model_.kind()) {
        case LevyModel::Kind::brownian:
            return brownian_W_prime<Cplx>(model_.as_brownian(), Cplx(q), x).real();
        case LevyModel::Kind::cp_exp_drift:
            return cp_exp_W_prime_c(model_.as_cp_exp(), Cplx(q), x).real();
        default: {
            const double h = std::max(1e-6, 1e-6 * x);
            if (x < h) return (W_numeric(q, x + h) - W_numeric(q, x)) / h;
            return (W_numeric(q, x + h) - W_numeric(q, x - h)) / (2.0 * h);
        }
    }
}

Cplx ScaleEvaluator::W_prime(Cplx q, double x) const {
    switch (model_.kind()) {
        case LevyModel::Kind::brownian:
            return brownian_W_prime<Cplx>(model_.as_brownian(), q, x);
        case LevyModel::Kind::cp_exp_drift:
            return cp_exp_W_prime_c(model_.as_cp_exp(), q, x);
        default:
            throw UnsupportedKind("ScaleEvaluator: complex scale index needs a closed form");
    }
}

double ScaleEvaluator::integral_W(double q, double c, double x) const {
    if (x <= 0.0) return 0.0;
    switch (model_.kind()) {
        case LevyModel::Kind::brownian:
            return brownian_integral_W<Cplx>(model_.as_brownian(), Cplx(q), Cplx(c), x).real();
        case LevyModel::Kind::cp_exp_drift:
            return cp_exp_integral_W_c(model_.as_cp_exp(), Cplx(q), Cplx(c), x).real();
        default:
            return integral_W_numeric(q, c, x);
    }
}

Cplx ScaleEvaluator::integral_W(Cplx q, Cplx c, double x) const {
    if (x <= 0.0) return {};
    switch (model_.kind()) {
        case LevyModel::Kind::brownian:
            return brownian_integral_W<Cplx>(model_.as_brownian(), q, c, x);
        case LevyModel::Kind::cp_exp_drift:
            return cp_exp_integral_W_c(model_.as_cp_exp(), q, c, x);
        default:
            throw UnsupportedKind("ScaleEvaluator: complex scale index needs a closed form");
    }
}

ScaleEvaluator::Tilted ScaleEvaluator::tilted(double q, double theta, double x) const {
    const double rate = model_.psi(q);
    Tilted t;
    const double w = W(q + theta, x);
    const double wp = W_prime(q + theta, x);
    const double damp = std::exp(-rate * x);
    t.W = damp * w;
    // product rule, avoids differencing e^{-rate x} W numerically
    t.W_prime = damp * (wp - rate * w);
    t.Z = 1.0 + theta * integral_W(q + theta, rate, x);
    return t;
}

ScaleEvaluator::Tilted ScaleEvaluator::tilted_at_rate(double rate_q2, double p, double x) const {
    // Tilt at rate c = psi(q2) with index p: plain scale index q2 + p.
    const double rate = model_.psi(rate_q2);
    const double index = rate_q2 + p;
    if (index <= model_.phi_min())
        throw DomainBoundary("tilted_at_rate: scale index below phi_min");
    Tilted t;
    const double w = W(index, x);
    const double wp = W_prime(index, x);
    const double damp = std::exp(-rate * x);
    t.W = damp * w;
    t.W_prime = damp * (wp - rate * w);
    t.Z = 1.0 + p * integral_W(index, rate, x);
    return t;
}

double ScaleEvaluator::selfconv(double q, double x) const {
    if (x <= 0.0) return 0.0;
    double err = 0.0;
    auto f = [&](double y) { return W(q, y) * W(q, x - y); };
    return gauss_kronrod<double, 15>::integrate(f, 0.0, x, 12, 1e-12, &err);
}

double ScaleEvaluator::selfconv_prime(double q, double x) const {
    if (x <= 0.0) return 0.0;
    // d/dx (W*W)(x) = W(0) W(x) + integral_0^x W'(y) W(x-y) dy
    double err = 0.0;
    auto f = [&](double y) { return W_prime(q, y) * W(q, x - y); };
    const double inner = gauss_kronrod<double, 15>::integrate(f, 0.0, x, 12, 1e-12, &err);
    return W(q, 0.0) * W(q, x) + inner;
}

}  // namespace occt
