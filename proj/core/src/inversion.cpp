#include "occt/inversion.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "occt/errors.hpp"

namespace occt {

namespace {

constexpr double kPi = std::numbers::pi;

// Euler summation after Abate & Whitt. The discretization parameter A
// controls the aliasing error (~ e^{-A}); it is derived from the target
// tolerance with a safety margin. The binomial average of the last
// euler_order+1 partial sums accelerates the alternating series.
InversionResult invert_euler(const TransformFn& fhat, double t, const InversionConfig& cfg) {
    const int n_sums = cfg.terms;
    const int m = cfg.euler_order;
    const double A = std::max(18.4, -std::log(cfg.target_abs_tol) + 5.0);

    const double h = kPi / t;
    const double gamma = A / (2.0 * t);

    // Partial sums s_k of the alternating trapezoidal series.
    std::vector<double> s(static_cast<size_t>(n_sums + m + 1));
    double acc = 0.5 * fhat(std::complex<double>(gamma, 0.0)).real();
    double sign = -1.0;
    for (int k = 1; k <= n_sums + m; ++k) {
        acc += sign * fhat(std::complex<double>(gamma, k * h)).real();
        s[static_cast<size_t>(k)] = acc;
        sign = -sign;
    }
    s[0] = 0.5 * fhat(std::complex<double>(gamma, 0.0)).real();

    // Binomial (Euler) averages of orders m and m-1; their difference is
    // the error estimate.
    auto euler_avg = [&](int order) {
        double num = 0.0;
        double binom = 1.0;  // C(order, j), accumulated iteratively
        double total = 0.0;
        for (int j = 0; j <= order; ++j) {
            num += binom * s[static_cast<size_t>(n_sums + j)];
            total += binom;
            binom = binom * (order - j) / (j + 1.0);
        }
        return num / total;
    };

    const double prefactor = std::exp(A / 2.0) / t;
    const double v_m = prefactor * euler_avg(m);
    const double v_m1 = prefactor * euler_avg(m - 1);

    InversionResult res;
    res.value = v_m;
    res.abs_error_estimate = std::abs(v_m - v_m1) + std::exp(-A);
    res.accuracy_reached = res.abs_error_estimate <= cfg.target_abs_tol;
    return res;
}

// Fixed Talbot after Abate & Valko: M nodes on the cotangent contour
// s(phi) = r*phi*(cot(phi) + i), phi in (0, pi).
InversionResult invert_talbot(const TransformFn& fhat, double t, const InversionConfig& cfg) {
    const int M = std::max(cfg.terms, 16);
    const double r = cfg.contour_scale * 2.0 * M / (5.0 * t);

    auto run = [&](int order) {
        double sum = 0.5 * std::exp(r * t) * fhat(std::complex<double>(r, 0.0)).real();
        for (int k = 1; k < order; ++k) {
            const double phi = k * kPi / order;
            const double cot = std::cos(phi) / std::sin(phi);
            const std::complex<double> s(r * phi * cot, r * phi);
            const double sigma = phi + (phi * cot - 1.0) * cot;
            const std::complex<double> v =
                std::exp(s * t) * fhat(s) * std::complex<double>(1.0, sigma);
            sum += v.real();
        }
        return sum * r / order;
    };

    const double v = run(M);
    const double v_lo = run(M - 4);

    InversionResult res;
    res.value = v;
    res.abs_error_estimate = std::abs(v - v_lo);
    res.accuracy_reached = res.abs_error_estimate <= cfg.target_abs_tol;
    return res;
}

}  // namespace

ComplexInversionResult invert_complex(const TransformFn& fhat, double t,
                                      const InversionConfig& cfg) {
    cfg.validate();
    if (!(t > 0.0)) throw InvalidRange("invert_complex: t must be > 0");
    const int n_sums = cfg.terms;
    const int m = cfg.euler_order;
    const double A = std::max(18.4, -std::log(cfg.target_abs_tol) + 5.0);
    const double h = kPi / t;
    const double gamma = A / (2.0 * t);

    // For f = g + i h with real g, h: on the line Re s = gamma,
    //   Re G(gamma + iy) = [Re F(gamma + iy) + Re F(gamma - iy)] / 2,
    //   Re H(gamma + iy) = [Im F(gamma + iy) + Im F(gamma - iy)] / 2,
    // so each Euler node needs the transform on both half-lines.
    std::vector<double> sg(static_cast<size_t>(n_sums + m + 1));
    std::vector<double> sh(static_cast<size_t>(n_sums + m + 1));
    const std::complex<double> f0 = fhat(std::complex<double>(gamma, 0.0));
    double accg = 0.5 * f0.real();
    double acch = 0.5 * f0.imag();
    sg[0] = accg;
    sh[0] = acch;
    double sign = -1.0;
    for (int k = 1; k <= n_sums + m; ++k) {
        const std::complex<double> up = fhat(std::complex<double>(gamma, k * h));
        const std::complex<double> dn = fhat(std::complex<double>(gamma, -k * h));
        accg += sign * 0.5 * (up.real() + dn.real());
        acch += sign * 0.5 * (up.imag() + dn.imag());
        sg[static_cast<size_t>(k)] = accg;
        sh[static_cast<size_t>(k)] = acch;
        sign = -sign;
    }

    auto euler_avg = [&](const std::vector<double>& s, int order) {
        double num = 0.0, binom = 1.0, total = 0.0;
        for (int j = 0; j <= order; ++j) {
            num += binom * s[static_cast<size_t>(n_sums + j)];
            total += binom;
            binom = binom * (order - j) / (j + 1.0);
        }
        return num / total;
    };

    const double prefactor = std::exp(A / 2.0) / t;
    const double g_m = prefactor * euler_avg(sg, m);
    const double g_m1 = prefactor * euler_avg(sg, m - 1);
    const double h_m = prefactor * euler_avg(sh, m);
    const double h_m1 = prefactor * euler_avg(sh, m - 1);

    ComplexInversionResult res;
    res.value = {g_m, h_m};
    res.abs_error_estimate =
        std::abs(g_m - g_m1) + std::abs(h_m - h_m1) + std::exp(-A);
    res.accuracy_reached = res.abs_error_estimate <= cfg.target_abs_tol;
    return res;
}

void InversionConfig::validate() const {
    if (terms < 10) throw ConfigError("InversionConfig: terms must be >= 10");
    if (target_abs_tol <= 0.0) throw ConfigError("InversionConfig: target_abs_tol must be > 0");
    if (euler_order < 2 || euler_order >= terms)
        throw ConfigError("InversionConfig: euler_order must be in [2, terms)");
}

InversionResult invert(const TransformFn& fhat, double t, const InversionConfig& cfg) {
    cfg.validate();
    if (!(t > 0.0)) throw InvalidRange("invert: t must be > 0");
    switch (cfg.algorithm) {
        case InversionAlgorithm::talbot:
            return invert_talbot(fhat, t, cfg);
        case InversionAlgorithm::euler_summation:
        default:
            return invert_euler(fhat, t, cfg);
    }
}

}  // namespace occt
