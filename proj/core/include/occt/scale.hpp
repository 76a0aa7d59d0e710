#pragma once

#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "occt/inversion.hpp"
#include "occt/levy.hpp"

namespace occt {

// Scale functions of a spectrally positive Levy process.
//
//   integral_0^inf e^{-theta x} W^{(q)}(x) dx = 1 / (phi(theta) - q),
//   theta > psi(q),
//   Z^{(q)}(x) = 1 + q integral_0^x W^{(q)}(y) dy,
//
// with W^{(q)}(x) = 0 for x < 0. Exponentially tilted variants at rate c
// and index p obey W_c^{(p)}(x) = e^{-c x} W^{(phi(c)+p)}(x).
//
// Closed forms are used for the Brownian and exponential-jump kinds; the
// phase-type kind goes through numerical inversion of 1/(phi(theta)-q)
// cached on an x-grid with cubic interpolation. The scale index q may be
// taken below zero down to phi_min (analytic continuation), which the
// large-deviations module relies on.
class ScaleEvaluator {
public:
    explicit ScaleEvaluator(LevyModel model, InversionConfig inv_cfg = {});

    const LevyModel& model() const { return model_; }

    // W^{(q)}(x); nonnegative nondecreasing on [0, inf), 0 for x < 0.
    // W^{(q)}(0) = 0 for unbounded variation, 1/drift for bounded variation.
    double W(double q, double x) const;
    std::complex<double> W(std::complex<double> q, double x) const;

    // Spatial derivative dW^{(q)}/dx (one-sided at 0). Analytic for the
    // closed-form kinds, central difference with step max(1e-6, 1e-6 x)
    // otherwise.
    double W_prime(double q, double x) const;
    std::complex<double> W_prime(std::complex<double> q, double x) const;

    // integral_0^x e^{-c y} W^{(q)}(y) dy. The c = 0 case feeds Z^{(q)};
    // general c feeds the tilted Z without overflowing at large x.
    double integral_W(double q, double c, double x) const;
    std::complex<double> integral_W(std::complex<double> q, std::complex<double> c,
                                    double x) const;

    double Z(double q, double x) const { return 1.0 + q * integral_W(q, 0.0, x); }

    // Tilted pair specialized to tilt rate psi(q) and index theta:
    //   W_tilt(x) = e^{-psi(q) x} W^{(q+theta)}(x),
    //   Z_tilt(x) = 1 + theta integral_0^x W_tilt(y) dy.
    struct Tilted {
        double W;
        double W_prime;  // d/dx of the tilted W
        double Z;
    };
    Tilted tilted(double q, double theta, double x) const;

    // Generalized tilt used by the sojourn joint transform: rate c = psi(q2)
    // and index p so that the plain scale index is q2 + p (may be negative
    // as long as it stays above phi_min).
    Tilted tilted_at_rate(double rate_q2, double p, double x) const;

    // (W^{(q)} * W^{(q)})(x) and its spatial derivative, by adaptive
    // Gauss-Kronrod quadrature. Equals d/dq W^{(q)}(x).
    double selfconv(double q, double x) const;
    double selfconv_prime(double q, double x) const;

    // True when W comes from a closed form rather than numerical inversion.
    bool closed_form() const;

private:
    struct PhaseTypeCache;

    double W_numeric(double q, double x) const;
    double integral_W_numeric(double q, double c, double x) const;

    LevyModel model_;
    InversionConfig inv_cfg_;
    mutable std::mutex cache_mutex_;
    mutable std::map<double, std::shared_ptr<PhaseTypeCache>> cache_;
};

}  // namespace occt
