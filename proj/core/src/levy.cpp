#include "occt/levy.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>

#include "occt/errors.hpp"

namespace occt {

namespace {

using Cplx = std::complex<double>;

// Jump-law Laplace transform for a phase-type (alpha, T) representation:
// fhat(s) = alpha' (sI - T)^{-1} t with exit vector t = -T 1.
template <typename Scalar>
Scalar phase_type_lt(const LevyModel::CpPhaseTypeDrift& p, Scalar s, int power = 1) {
    const int n = static_cast<int>(p.alpha.size());
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> M(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            M(i, j) = (i == j ? s : Scalar(0)) - Scalar(p.T[static_cast<size_t>(i * n + j)]);
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> exit(n);
    for (int i = 0; i < n; ++i) {
        double row = 0.0;
        for (int j = 0; j < n; ++j) row += p.T[static_cast<size_t>(i * n + j)];
        exit(i) = Scalar(-row);
    }
    auto lu = M.partialPivLu();
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> x = lu.solve(exit);
    for (int k = 1; k < power; ++k) x = lu.solve(x);
    Scalar out(0);
    for (int i = 0; i < n; ++i) out += Scalar(p.alpha[static_cast<size_t>(i)]) * x(i);
    return out;
}

// Largest real part of the eigenvalues of T bounds the strip where the
// phase-type transform is finite.
double phase_type_analyticity_inf(const LevyModel::CpPhaseTypeDrift& p) {
    const int n = static_cast<int>(p.alpha.size());
    Eigen::MatrixXd T(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) T(i, j) = p.T[static_cast<size_t>(i * n + j)];
    Eigen::VectorXcd ev = T.eigenvalues();
    double max_re = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) max_re = std::max(max_re, ev(i).real());
    return max_re;  // negative for a proper subgenerator
}

}  // namespace

LevyModel LevyModel::brownian(double mu, double sigma2) {
    if (!(sigma2 > 0.0)) throw ConfigError("brownian: sigma2 must be > 0");
    return LevyModel(Brownian{mu, sigma2});
}

LevyModel LevyModel::cp_exp_drift(double lambda, double jump_mean) {
    if (!(lambda > 0.0) || !(jump_mean > 0.0))
        throw ConfigError("cp_exp_drift: lambda and jump_mean must be > 0");
    return LevyModel(CpExpDrift{lambda, 1.0 / jump_mean});
}

LevyModel LevyModel::cp_phase_type_drift(double lambda, std::vector<double> alpha,
                                         std::vector<double> T) {
    if (!(lambda > 0.0)) throw ConfigError("cp_phase_type_drift: lambda must be > 0");
    const size_t n = alpha.size();
    if (n == 0 || T.size() != n * n)
        throw ConfigError("cp_phase_type_drift: T must be n x n for n = |alpha|");
    double sum = 0.0;
    for (double a : alpha) sum += a;
    if (std::abs(sum - 1.0) > 1e-12)
        throw ConfigError("cp_phase_type_drift: alpha must sum to 1");
    return LevyModel(CpPhaseTypeDrift{lambda, std::move(alpha), std::move(T)});
}

LevyModel::Kind LevyModel::kind() const {
    if (std::holds_alternative<Brownian>(data_)) return Kind::brownian;
    if (std::holds_alternative<CpExpDrift>(data_)) return Kind::cp_exp_drift;
    return Kind::cp_phase_type_drift;
}

std::string LevyModel::kind_name() const {
    switch (kind()) {
        case Kind::brownian: return "brownian";
        case Kind::cp_exp_drift: return "cp_exp_drift";
        default: return "cp_phase_type_drift";
    }
}

double LevyModel::phi(double a) const {
    if (a <= analyticity_inf())
        throw InvalidRange("phi: argument outside the analyticity strip");
    if (const auto* b = std::get_if<Brownian>(&data_))
        return 0.5 * b->sigma2 * a * a - b->mu * a;
    if (const auto* c = std::get_if<CpExpDrift>(&data_))
        return a - c->lambda * a / (c->jump_rate + a);
    const auto& p = std::get<CpPhaseTypeDrift>(data_);
    return a - p.lambda * (1.0 - phase_type_lt<double>(p, a));
}

std::complex<double> LevyModel::phi(Cplx a) const {
    if (const auto* b = std::get_if<Brownian>(&data_))
        return 0.5 * b->sigma2 * a * a - b->mu * a;
    if (const auto* c = std::get_if<CpExpDrift>(&data_))
        return a - c->lambda * a / (c->jump_rate + a);
    const auto& p = std::get<CpPhaseTypeDrift>(data_);
    return a - p.lambda * (Cplx(1.0) - phase_type_lt<Cplx>(p, a));
}

double LevyModel::phi_prime(double a) const {
    if (const auto* b = std::get_if<Brownian>(&data_)) return b->sigma2 * a - b->mu;
    if (const auto* c = std::get_if<CpExpDrift>(&data_)) {
        const double d = c->jump_rate + a;
        return 1.0 - c->lambda * c->jump_rate / (d * d);
    }
    const auto& p = std::get<CpPhaseTypeDrift>(data_);
    // d/da fhat = -alpha'(aI-T)^{-2} t
    return 1.0 - p.lambda * phase_type_lt<double>(p, a, 2);
}

double LevyModel::phi_double_prime(double a) const {
    if (const auto* b = std::get_if<Brownian>(&data_)) return b->sigma2;
    if (const auto* c = std::get_if<CpExpDrift>(&data_)) {
        const double d = c->jump_rate + a;
        return 2.0 * c->lambda * c->jump_rate / (d * d * d);
    }
    const auto& p = std::get<CpPhaseTypeDrift>(data_);
    return 2.0 * p.lambda * phase_type_lt<double>(p, a, 3);
}

double LevyModel::analyticity_inf() const {
    if (std::holds_alternative<Brownian>(data_))
        return -std::numeric_limits<double>::infinity();
    if (const auto* c = std::get_if<CpExpDrift>(&data_)) return -c->jump_rate;
    return phase_type_analyticity_inf(std::get<CpPhaseTypeDrift>(data_));
}

double LevyModel::phi_argmin() const {
    if (const auto* b = std::get_if<Brownian>(&data_)) return b->mu / b->sigma2;
    // phi is convex; solve phi'(a*) = 0 by bisection on (analyticity_inf, 0].
    if (phi_prime(0.0) <= 0.0) return 0.0;  // unstable: minimum at/above 0
    double hi = 0.0;
    double lo = analyticity_inf();
    // walk toward the pole until phi' < 0
    double probe = lo + 0.5 * (hi - lo);
    for (int i = 0; i < 200; ++i) {
        if (phi_prime(probe) < 0.0) break;
        probe = lo + 0.5 * (probe - lo);
    }
    lo = probe;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (phi_prime(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double LevyModel::phi_min() const { return phi(phi_argmin()); }

double LevyModel::psi(double q) const {
    if (const auto* b = std::get_if<Brownian>(&data_)) {
        // Larger quadratic root; doubles as the right-inverse when mu >= 0.
        const double disc = b->mu * b->mu + 2.0 * b->sigma2 * q;
        if (disc < 0.0) throw DomainBoundary("psi: q below phi_min");
        return (b->mu + std::sqrt(disc)) / b->sigma2;
    }
    if (!stable()) throw UnstableModel("psi: right-inverse not implemented for E X(1) >= 0");
    if (q == 0.0) return 0.0;
    if (q < 0.0) {
        // Increasing-branch root in (argmin, 0).
        const double amin = phi_argmin();
        if (q <= phi_min()) throw DomainBoundary("psi: q below phi_min");
        double lo = amin, hi = 0.0;
        for (int i = 0; i < 200; ++i) {
            const double mid = 0.5 * (lo + hi);
            (phi(mid) < q ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    }
    // Newton with analytic phi', bracketed bisection fallback. phi is convex
    // and increasing on [0, inf) for stable models, so q / phi'(0) bounds the
    // root from above and Newton from the right converges monotonically.
    double x = q / phi_prime(0.0);
    double hi = std::max(x, 1e-300);
    while (phi(hi) < q) hi *= 2.0;
    double lo = 0.0;
    x = hi;
    for (int i = 0; i < 100; ++i) {
        const double f = phi(x) - q;
        if (f > 0.0)
            hi = x;
        else
            lo = x;
        const double step = f / phi_prime(x);
        double next = x - step;
        if (!(next > lo) || !(next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - x) <= 1e-15 * std::max(1.0, std::abs(x))) {
            x = next;
            break;
        }
        x = next;
    }
    return x;
}

std::complex<double> LevyModel::psi(Cplx q) const {
    if (q.imag() == 0.0 && q.real() >= 0.0) return psi(q.real());
    if (const auto* b = std::get_if<Brownian>(&data_)) {
        // Principal branch: mu^2 + 2 sigma2 q stays off (-inf, 0] for Re q > 0.
        return (b->mu + std::sqrt(Cplx(b->mu * b->mu) + 2.0 * b->sigma2 * q)) / b->sigma2;
    }
    if (const auto* c = std::get_if<CpExpDrift>(&data_)) {
        // phi(a) = q  <=>  a^2 + (mu_J - lambda - q) a - q mu_J = 0.
        const double muj = c->jump_rate;
        const Cplx bq = Cplx(muj - c->lambda) - q;
        const Cplx disc = bq * bq + 4.0 * q * muj;
        return 0.5 * (-bq + std::sqrt(disc));
    }
    // Phase-type: Newton continued from the real solution.
    Cplx x(psi(std::abs(q)), 0.0);
    for (int i = 0; i < 100; ++i) {
        const Cplx f = phi(x) - q;
        // complex phi' via the same rational structure, finite difference is
        // adequate here because phi is entire on the strip
        const Cplx h(1e-7 * std::max(1.0, std::abs(x)), 0.0);
        const Cplx fp = (phi(x + h) - phi(x - h)) / (2.0 * h);
        const Cplx step = f / fp;
        x -= step;
        if (std::abs(step) <= 1e-13 * std::max(1.0, std::abs(x))) break;
    }
    return x;
}

double LevyModel::psi_prime0() const {
    const double d = phi_prime(0.0);
    if (d <= 0.0) throw UnstableModel("psi_prime0: requires E X(1) < 0");
    return 1.0 / d;
}

double LevyModel::psi_double_prime0() const {
    const double d = phi_prime(0.0);
    if (d <= 0.0) throw UnstableModel("psi_double_prime0: requires E X(1) < 0");
    return -phi_double_prime(0.0) / (d * d * d);
}

double LevyModel::sample_jump(Rng& rng) const {
    if (const auto* c = std::get_if<CpExpDrift>(&data_)) return rng.exponential(c->jump_rate);
    if (const auto* p = std::get_if<CpPhaseTypeDrift>(&data_)) {
        // Simulate the absorbing Markov chain.
        const int n = static_cast<int>(p->alpha.size());
        // initial phase
        double u = rng.uniform();
        int phase = n - 1;
        double cum = 0.0;
        for (int i = 0; i < n; ++i) {
            cum += p->alpha[static_cast<size_t>(i)];
            if (u <= cum) {
                phase = i;
                break;
            }
        }
        double total = 0.0;
        while (true) {
            const double rate = -p->T[static_cast<size_t>(phase * n + phase)];
            total += rng.exponential(rate);
            // transition to phase j with rate T[i][j], absorb with the rest
            double v = rng.uniform() * rate;
            int next = -1;
            double acc = 0.0;
            for (int j = 0; j < n; ++j) {
                if (j == phase) continue;
                acc += p->T[static_cast<size_t>(phase * n + j)];
                if (v <= acc) {
                    next = j;
                    break;
                }
            }
            if (next < 0) return total;  // absorbed
            phase = next;
        }
    }
    throw UnsupportedKind("sample_jump: Brownian kind has no jumps");
}

double LevyModel::jump_rate_lambda() const {
    if (const auto* c = std::get_if<CpExpDrift>(&data_)) return c->lambda;
    if (const auto* p = std::get_if<CpPhaseTypeDrift>(&data_)) return p->lambda;
    throw UnsupportedKind("jump_rate_lambda: Brownian kind has no jumps");
}

}  // namespace occt
