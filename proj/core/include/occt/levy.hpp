#pragma once

#include <complex>
#include <string>
#include <variant>
#include <vector>

#include "occt/rng.hpp"

namespace occt {

// Spectrally positive Levy process X with E e^{-a X(1)} = e^{phi(a)}.
//
// Shipped parametrizations:
//  * brownian(mu, sigma2):        X(t) = mu t + sigma B(t),
//                                 phi(a) = sigma2 a^2 / 2 - mu a
//  * cp_exp_drift(lambda, jm):    X(t) = sum of Exp(1/jm) jumps at rate
//                                 lambda minus unit drift,
//                                 phi(a) = a - lambda a / (mu_J + a)
//  * cp_phase_type_drift:         compound Poisson with phase-type jumps
//                                 minus unit drift; phi via the jump
//                                 transform fhat(a) = alpha' (aI - T)^{-1} t.
//
// The compound Poisson kinds keep the drift normalized to r = 1; rescale
// time to map other drifts onto this parametrization.
class LevyModel {
public:
    struct Brownian {
        double mu;
        double sigma2;
    };
    struct CpExpDrift {
        double lambda;
        double jump_rate;  // mu_J = 1 / jump_mean
    };
    struct CpPhaseTypeDrift {
        double lambda;
        std::vector<double> alpha;  // initial phase distribution
        std::vector<double> T;      // subgenerator, row-major n x n
    };

    static LevyModel brownian(double mu, double sigma2);
    static LevyModel cp_exp_drift(double lambda, double jump_mean);
    static LevyModel cp_phase_type_drift(double lambda, std::vector<double> alpha,
                                         std::vector<double> T);

    enum class Kind { brownian, cp_exp_drift, cp_phase_type_drift };
    Kind kind() const;
    std::string kind_name() const;
    bool bounded_variation() const { return kind() != Kind::brownian; }

    const Brownian& as_brownian() const { return std::get<Brownian>(data_); }
    const CpExpDrift& as_cp_exp() const { return std::get<CpExpDrift>(data_); }
    const CpPhaseTypeDrift& as_cp_phase_type() const {
        return std::get<CpPhaseTypeDrift>(data_);
    }

    // Laplace exponent and derivatives. The real overload requires a >
    // analyticity_inf() (strictly greater than -mu_J for jump kinds).
    double phi(double a) const;
    std::complex<double> phi(std::complex<double> a) const;
    double phi_prime(double a) const;
    double phi_double_prime(double a) const;

    double mean() const { return -phi_prime(0.0); }  // E X(1)
    bool stable() const { return mean() < 0.0; }

    // Left edge of the strip where phi is defined (jump transform pole).
    double analyticity_inf() const;

    // Location and value of the minimum of phi; phi_min < 0 for stable
    // models. W^{(q)} and first-passage transforms continue to q > phi_min.
    double phi_argmin() const;
    double phi_min() const;

    // Inverse of phi on the increasing branch: phi(psi(q)) = q to 1e-12
    // relative. Defined for q > phi_min(); negative q selects the root in
    // (argmin, 0]. Throws UnstableModel when E X(1) >= 0 for the compound
    // Poisson kinds; the Brownian closed form doubles as the right-inverse.
    double psi(double q) const;

    // Analytic continuation of psi to complex q (principal branch for the
    // closed-form kinds, warm-started Newton for phase-type). Requires
    // Re q >= 0, q != 0 unless stable.
    std::complex<double> psi(std::complex<double> q) const;

    double psi_prime0() const;         // 1 / phi'(0)
    double psi_double_prime0() const;  // -phi''(0) / phi'(0)^3

    // One jump drawn from the jump law (compound Poisson kinds only).
    double sample_jump(Rng& rng) const;
    double jump_rate_lambda() const;

private:
    explicit LevyModel(std::variant<Brownian, CpExpDrift, CpPhaseTypeDrift> d)
        : data_(std::move(d)) {}

    std::variant<Brownian, CpExpDrift, CpPhaseTypeDrift> data_;
};

}  // namespace occt
