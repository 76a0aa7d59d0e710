#pragma once

#include <complex>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "occt/levy.hpp"
#include "occt/rng.hpp"

namespace occt {

class ScaleEvaluator;

// Univariate sojourn marginal: distribution family + parameters.
class Marginal {
public:
    struct Exponential {
        double rate;
    };
    struct Erlang {
        int shape;
        double rate;
    };
    struct Deterministic {
        double value;
    };

    static Marginal exponential(double rate);
    static Marginal erlang(int shape, double rate);
    static Marginal deterministic(double value);

    double sample(Rng& rng) const;
    double cdf(double x) const;         // P(X <= x)
    double cdf_strict(double x) const;  // P(X < x); differs only at atoms
    std::complex<double> laplace(std::complex<double> theta) const;  // E e^{-theta X}
    double mean() const;
    double variance() const;

    // sup { a : E e^{aX} < inf } and the MGF itself (+inf outside).
    double mgf_sup() const;
    double mgf(double a) const;

    std::string name() const;

private:
    template <typename T>
    explicit Marginal(T v) : data_(v) {}
    std::variant<Exponential, Erlang, Deterministic> data_;
};

// Means, variances, covariance of the generic cycle pair (D, U) plus the
// scale constant of the Gaussian regime,
//   C = (beta^2 var_D + alpha^2 var_U - 2 alpha beta cov) / (alpha+beta)^3.
struct MomentSummary {
    double alpha = 0.0;   // E D
    double beta = 0.0;    // E U
    double var_D = 0.0;   // sigma_alpha^2
    double var_U = 0.0;   // sigma_beta^2
    double cov_DU = 0.0;  // c
    double clt_scale = 0.0;

    // Set when var_U came from the transform-derivative arbiter rather than
    // the closed-form expression (see storage_stats).
    bool var_U_from_transform = false;

    static MomentSummary from_moments(double alpha, double beta, double var_D, double var_U,
                                      double cov_DU);
    double mean_fraction() const { return alpha / (alpha + beta); }
};

// Bivariate law of the generic sojourn pair (D, U); D, U > 0 a.s., pairs
// i.i.d. across cycles, dependence within a pair allowed.
class SojournLaw {
public:
    // D independent of U with the given marginals.
    static SojournLaw independent(Marginal d, Marginal u);

    // Marshall-Olkin bivariate exponential: D = min(Z_D, Z_C),
    // U = min(Z_U, Z_C) with independent exponentials Z_D ~ Exp(rate_d),
    // Z_U ~ Exp(rate_u), Z_C ~ Exp(rate_common).
    static SojournLaw marshall_olkin(double rate_d, double rate_u, double rate_common);

    // Cycle law of the reflected storage process of `model` around level tau:
    // D = time below-or-at tau, U = the excursion above.
    static SojournLaw storage_induced(LevyModel model, double tau);

    // Resampling law of observed (d, u) pairs.
    static SojournLaw empirical(std::vector<std::pair<double, double>> samples);

    enum class Kind { independent, marshall_olkin, storage_induced, empirical };
    Kind kind() const { return kind_; }
    std::string kind_name() const;

    // Same law with the roles of D and U exchanged (starts in B).
    SojournLaw swapped() const;

    // --- sampling ------------------------------------------------------
    std::pair<double, double> sample_pair(Rng& rng) const;

    // --- transforms ----------------------------------------------------
    // L1(theta)       = E e^{-theta D}
    // LU(theta)       = E e^{-theta U}
    // L12(th1, th2)   = E e^{-th1 D - th2 U}
    std::complex<double> L1(std::complex<double> theta) const;
    std::complex<double> LU(std::complex<double> theta) const;
    std::complex<double> L12(std::complex<double> th1, std::complex<double> th2) const;

    // --- marginal distribution functions --------------------------------
    bool has_analytic_cdf() const;
    double cdf_D(double x, bool strict = false) const;  // F
    double cdf_U(double x, bool strict = false) const;  // G

    // --- moments ---------------------------------------------------------
    MomentSummary moments() const;

    // --- moment generating function (large deviations) -------------------
    // E e^{aD + bU}; +infinity is a legal return outside the domain.
    double joint_mgf(double a, double b) const;
    struct MgfDomain {
        double sup_a;
        double sup_b;
    };
    MgfDomain mgf_domain() const;

    // --- lattice discretization ------------------------------------------
    // Cell-midpoint masses on the uniform grid {0, h, 2h, ...}: index k
    // carries the mass of the cell centered at k h (atoms exactly between
    // cells go to the left edge). Dependent kinds without a closed-form
    // joint law are discretized from `empirical_samples` simulated pairs.
    std::vector<double> lattice_D(double h, int n) const;
    std::vector<double> lattice_U(double h, int n) const;
    // Row-major nx x ny joint masses.
    std::vector<double> lattice_joint(double h, int nx, int ny) const;

    // Hint for the lattice step: min(E D, E U) / 50.
    double default_lattice_step() const;

    // storage-induced accessors (throws otherwise)
    const LevyModel& storage_model() const;
    double storage_tau() const;

    // empirical-kind samples used for lattices (generated lazily for the
    // storage kind). Seeded deterministically from the law parameters.
    const std::vector<std::pair<double, double>>& pair_samples(int min_count = 200000) const;

private:
    struct Independent {
        Marginal d, u;
    };
    struct MarshallOlkin {
        double rate_d, rate_u, rate_common;
    };
    struct Storage {
        LevyModel model;
        double tau;
        std::shared_ptr<ScaleEvaluator> scale;
    };
    struct Empirical {
        std::vector<std::pair<double, double>> samples;
    };

    SojournLaw(Kind k, std::variant<Independent, MarshallOlkin, Storage, Empirical> d)
        : kind_(k), data_(std::move(d)) {}

    std::complex<double> L12_raw(std::complex<double> th1, std::complex<double> th2) const;
    std::pair<double, double> sample_pair_raw(Rng& rng) const;
    double marginal_cdf(bool want_u, double x, bool strict) const;
    std::vector<double> lattice_marginal(bool want_u, double h, int n) const;

    Kind kind_;
    std::variant<Independent, MarshallOlkin, Storage, Empirical> data_;
    bool swap_roles_ = false;
    mutable std::shared_ptr<std::vector<std::pair<double, double>>> sim_cache_;
};

}  // namespace occt
