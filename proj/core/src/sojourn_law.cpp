#include "occt/sojourn_law.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>

#include "occt/errors.hpp"
#include "occt/scale.hpp"
#include "occt/simulate.hpp"
#include "occt/storage_stats.hpp"

namespace occt {

namespace {

using Cplx = std::complex<double>;
constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t mix_bits(std::uint64_t h, double v) {
    std::uint64_t b;
    static_assert(sizeof(b) == sizeof(v));
    std::memcpy(&b, &v, sizeof(b));
    h ^= b + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
}

}  // namespace

// ---------------------------------------------------------------------------
// Marginal
// ---------------------------------------------------------------------------

Marginal Marginal::exponential(double rate) {
    if (!(rate > 0.0)) throw ConfigError("exponential: rate must be > 0");
    return Marginal(Exponential{rate});
}

Marginal Marginal::erlang(int shape, double rate) {
    if (shape < 1 || !(rate > 0.0)) throw ConfigError("erlang: shape >= 1, rate > 0");
    return Marginal(Erlang{shape, rate});
}

Marginal Marginal::deterministic(double value) {
    if (!(value > 0.0)) throw ConfigError("deterministic: value must be > 0");
    return Marginal(Deterministic{value});
}

double Marginal::sample(Rng& rng) const {
    if (const auto* e = std::get_if<Exponential>(&data_)) return rng.exponential(e->rate);
    if (const auto* g = std::get_if<Erlang>(&data_)) return rng.erlang(g->shape, g->rate);
    return std::get<Deterministic>(data_).value;
}

double Marginal::cdf(double x) const {
    if (x < 0.0) return 0.0;
    if (const auto* e = std::get_if<Exponential>(&data_)) return -std::expm1(-e->rate * x);
    if (const auto* g = std::get_if<Erlang>(&data_)) {
        // 1 - e^{-rx} sum_{i<k} (rx)^i / i!
        const double rx = g->rate * x;
        double term = 1.0, sum = 1.0;
        for (int i = 1; i < g->shape; ++i) {
            term *= rx / i;
            sum += term;
        }
        return 1.0 - std::exp(-rx) * sum;
    }
    return x >= std::get<Deterministic>(data_).value ? 1.0 : 0.0;
}

double Marginal::cdf_strict(double x) const {
    if (const auto* d = std::get_if<Deterministic>(&data_))
        return x > d->value ? 1.0 : 0.0;
    return cdf(x);
}

Cplx Marginal::laplace(Cplx theta) const {
    if (const auto* e = std::get_if<Exponential>(&data_)) return e->rate / (e->rate + theta);
    if (const auto* g = std::get_if<Erlang>(&data_))
        return std::pow(g->rate / (g->rate + theta), g->shape);
    return std::exp(-theta * std::get<Deterministic>(data_).value);
}

double Marginal::mean() const {
    if (const auto* e = std::get_if<Exponential>(&data_)) return 1.0 / e->rate;
    if (const auto* g = std::get_if<Erlang>(&data_)) return g->shape / g->rate;
    return std::get<Deterministic>(data_).value;
}

double Marginal::variance() const {
    if (const auto* e = std::get_if<Exponential>(&data_)) return 1.0 / (e->rate * e->rate);
    if (const auto* g = std::get_if<Erlang>(&data_)) return g->shape / (g->rate * g->rate);
    return 0.0;
}

double Marginal::mgf_sup() const {
    if (const auto* e = std::get_if<Exponential>(&data_)) return e->rate;
    if (const auto* g = std::get_if<Erlang>(&data_)) return g->rate;
    return kInf;
}

double Marginal::mgf(double a) const {
    if (a >= mgf_sup()) return kInf;
    return laplace(Cplx(-a)).real();
}

std::string Marginal::name() const {
    if (std::holds_alternative<Exponential>(data_)) return "exponential";
    if (std::holds_alternative<Erlang>(data_)) return "erlang";
    return "deterministic";
}

// ---------------------------------------------------------------------------
// MomentSummary
// ---------------------------------------------------------------------------

MomentSummary MomentSummary::from_moments(double alpha, double beta, double var_D, double var_U,
                                          double cov_DU) {
    if (!(alpha > 0.0) || !(beta > 0.0))
        throw InfiniteMoment("MomentSummary: means must be positive and finite");
    if (!std::isfinite(var_D) || !std::isfinite(var_U))
        throw InfiniteMoment("MomentSummary: variances must be finite");
    MomentSummary ms;
    ms.alpha = alpha;
    ms.beta = beta;
    ms.var_D = var_D;
    ms.var_U = var_U;
    ms.cov_DU = cov_DU;
    const double s = alpha + beta;
    ms.clt_scale = std::max(
        0.0, (beta * beta * var_D + alpha * alpha * var_U - 2.0 * alpha * beta * cov_DU) /
                 (s * s * s));
    return ms;
}

// ---------------------------------------------------------------------------
// SojournLaw
// ---------------------------------------------------------------------------

SojournLaw SojournLaw::independent(Marginal d, Marginal u) {
    return SojournLaw(Kind::independent, Independent{d, u});
}

SojournLaw SojournLaw::marshall_olkin(double rate_d, double rate_u, double rate_common) {
    if (!(rate_d > 0.0) || !(rate_u > 0.0) || !(rate_common >= 0.0))
        throw ConfigError("marshall_olkin: rates must be positive (common >= 0)");
    return SojournLaw(Kind::marshall_olkin, MarshallOlkin{rate_d, rate_u, rate_common});
}

SojournLaw SojournLaw::storage_induced(LevyModel model, double tau) {
    if (!(tau > 0.0)) throw ConfigError("storage_induced: tau must be > 0");
    if (!model.bounded_variation())
        throw UnsupportedKind("storage_induced: cycle law needs bounded variation paths");
    if (!model.stable()) throw UnstableModel("storage_induced: E X(1) must be < 0");
    auto scale = std::make_shared<ScaleEvaluator>(model);
    return SojournLaw(Kind::storage_induced, Storage{std::move(model), tau, std::move(scale)});
}

SojournLaw SojournLaw::empirical(std::vector<std::pair<double, double>> samples) {
    if (samples.empty()) throw EmptySample("empirical: sample list is empty");
    for (const auto& [d, u] : samples)
        if (!(d > 0.0) || !(u > 0.0))
            throw ConfigError("empirical: sojourn samples must be strictly positive");
    return SojournLaw(Kind::empirical, Empirical{std::move(samples)});
}

std::string SojournLaw::kind_name() const {
    switch (kind_) {
        case Kind::independent: return "independent";
        case Kind::marshall_olkin: return "marshall_olkin";
        case Kind::storage_induced: return "storage_induced";
        default: return "empirical";
    }
}

SojournLaw SojournLaw::swapped() const {
    SojournLaw out = *this;
    out.swap_roles_ = !swap_roles_;
    return out;
}

std::pair<double, double> SojournLaw::sample_pair_raw(Rng& rng) const {
    switch (kind_) {
        case Kind::independent: {
            const auto& p = std::get<Independent>(data_);
            return {p.d.sample(rng), p.u.sample(rng)};
        }
        case Kind::marshall_olkin: {
            const auto& p = std::get<MarshallOlkin>(data_);
            const double zc =
                p.rate_common > 0.0 ? rng.exponential(p.rate_common) : kInf;
            const double zd = rng.exponential(p.rate_d);
            const double zu = rng.exponential(p.rate_u);
            return {std::min(zd, zc), std::min(zu, zc)};
        }
        case Kind::storage_induced: {
            const auto& p = std::get<Storage>(data_);
            const auto cyc = simulate_storage_cycles(p.model, p.tau, 1, rng);
            return {cyc[0].d, cyc[0].u};
        }
        default: {
            const auto& s = std::get<Empirical>(data_).samples;
            return s[static_cast<size_t>(rng.bounded(s.size()))];
        }
    }
}

std::pair<double, double> SojournLaw::sample_pair(Rng& rng) const {
    auto p = sample_pair_raw(rng);
    if (swap_roles_) std::swap(p.first, p.second);
    return p;
}

Cplx SojournLaw::L12_raw(Cplx th1, Cplx th2) const {
    switch (kind_) {
        case Kind::independent: {
            const auto& p = std::get<Independent>(data_);
            return p.d.laplace(th1) * p.u.laplace(th2);
        }
        case Kind::marshall_olkin: {
            const auto& p = std::get<MarshallOlkin>(data_);
            const double total = p.rate_d + p.rate_u + p.rate_common;
            // Condition on which of the three exponentials fires first.
            const Cplx common_first = p.rate_common;
            const Cplx d_first =
                p.rate_d * (p.rate_u + p.rate_common) / (p.rate_u + p.rate_common + th2);
            const Cplx u_first =
                p.rate_u * (p.rate_d + p.rate_common) / (p.rate_d + p.rate_common + th1);
            return (common_first + d_first + u_first) / (total + th1 + th2);
        }
        case Kind::storage_induced: {
            const auto& p = std::get<Storage>(data_);
            return storage::sojourn_joint_transform(*p.scale, p.tau, th1, th2);
        }
        default: {
            const auto& s = std::get<Empirical>(data_).samples;
            Cplx acc(0.0);
            for (const auto& [d, u] : s) acc += std::exp(-th1 * d - th2 * u);
            return acc / static_cast<double>(s.size());
        }
    }
}

Cplx SojournLaw::L12(Cplx th1, Cplx th2) const {
    return swap_roles_ ? L12_raw(th2, th1) : L12_raw(th1, th2);
}

Cplx SojournLaw::L1(Cplx theta) const { return L12(theta, Cplx(0.0)); }

Cplx SojournLaw::LU(Cplx theta) const { return L12(Cplx(0.0), theta); }

bool SojournLaw::has_analytic_cdf() const {
    return kind_ == Kind::independent;
}

double SojournLaw::marginal_cdf(bool want_u, double x, bool strict) const {
    if (kind_ == Kind::independent) {
        const auto& p = std::get<Independent>(data_);
        const Marginal& m = want_u ? p.u : p.d;
        return strict ? m.cdf_strict(x) : m.cdf(x);
    }
    if (kind_ == Kind::marshall_olkin) {
        const auto& p = std::get<MarshallOlkin>(data_);
        const double rate = (want_u ? p.rate_u : p.rate_d) + p.rate_common;
        return x <= 0.0 ? 0.0 : -std::expm1(-rate * x);
    }
    // Empirical proportion (storage kinds fall back to simulated pairs).
    const auto& s = pair_samples();
    std::size_t count = 0;
    for (const auto& [d, u] : s) {
        const double v = want_u ? u : d;
        if (strict ? (v < x) : (v <= x)) ++count;
    }
    return static_cast<double>(count) / static_cast<double>(s.size());
}

double SojournLaw::cdf_D(double x, bool strict) const {
    return marginal_cdf(swap_roles_, x, strict);
}

double SojournLaw::cdf_U(double x, bool strict) const {
    return marginal_cdf(!swap_roles_, x, strict);
}

MomentSummary SojournLaw::moments() const {
    MomentSummary raw;
    switch (kind_) {
        case Kind::independent: {
            const auto& p = std::get<Independent>(data_);
            raw = MomentSummary::from_moments(p.d.mean(), p.u.mean(), p.d.variance(),
                                              p.u.variance(), 0.0);
            break;
        }
        case Kind::marshall_olkin: {
            const auto& p = std::get<MarshallOlkin>(data_);
            const double ad = p.rate_d + p.rate_common;
            const double au = p.rate_u + p.rate_common;
            const double total = p.rate_d + p.rate_u + p.rate_common;
            const double cov = p.rate_common / (total * ad * au);
            raw = MomentSummary::from_moments(1.0 / ad, 1.0 / au, 1.0 / (ad * ad),
                                              1.0 / (au * au), cov);
            break;
        }
        case Kind::storage_induced: {
            const auto& p = std::get<Storage>(data_);
            raw = storage::sojourn_moments(*p.scale, p.tau).summary;
            break;
        }
        default: {
            const auto& s = std::get<Empirical>(data_).samples;
            const auto n = static_cast<double>(s.size());
            double md = 0.0, mu = 0.0;
            for (const auto& [d, u] : s) {
                md += d;
                mu += u;
            }
            md /= n;
            mu /= n;
            double vd = 0.0, vu = 0.0, c = 0.0;
            for (const auto& [d, u] : s) {
                vd += (d - md) * (d - md);
                vu += (u - mu) * (u - mu);
                c += (d - md) * (u - mu);
            }
            raw = MomentSummary::from_moments(md, mu, vd / n, vu / n, c / n);
            break;
        }
    }
    if (!swap_roles_) return raw;
    MomentSummary sw = MomentSummary::from_moments(raw.beta, raw.alpha, raw.var_U, raw.var_D,
                                                   raw.cov_DU);
    sw.var_U_from_transform = raw.var_U_from_transform;
    return sw;
}

double SojournLaw::joint_mgf(double a, double b) const {
    if (swap_roles_) std::swap(a, b);
    switch (kind_) {
        case Kind::independent: {
            const auto& p = std::get<Independent>(data_);
            const double md = p.d.mgf(a);
            const double mu = p.u.mgf(b);
            return (std::isinf(md) || std::isinf(mu)) ? kInf : md * mu;
        }
        case Kind::marshall_olkin: {
            const auto& p = std::get<MarshallOlkin>(data_);
            const double total = p.rate_d + p.rate_u + p.rate_common;
            if (a + b >= total || a >= p.rate_d + p.rate_common ||
                b >= p.rate_u + p.rate_common)
                return kInf;
            return L12_raw(Cplx(-a), Cplx(-b)).real();
        }
        case Kind::storage_induced: {
            const auto& p = std::get<Storage>(data_);
            if (a >= -p.model.phi_min() || b >= -p.model.phi_min()) return kInf;
            try {
                const double v = storage::sojourn_joint_transform(*p.scale, p.tau, -a, -b);
                return (std::isfinite(v) && v > 0.0) ? v : kInf;
            } catch (const DomainBoundary&) {
                return kInf;
            }
        }
        default: {
            const auto& s = std::get<Empirical>(data_).samples;
            double acc = 0.0;
            for (const auto& [d, u] : s) acc += std::exp(a * d + b * u);
            return acc / static_cast<double>(s.size());
        }
    }
}

SojournLaw::MgfDomain SojournLaw::mgf_domain() const {
    MgfDomain dom{kInf, kInf};
    switch (kind_) {
        case Kind::independent: {
            const auto& p = std::get<Independent>(data_);
            dom = {p.d.mgf_sup(), p.u.mgf_sup()};
            break;
        }
        case Kind::marshall_olkin: {
            const auto& p = std::get<MarshallOlkin>(data_);
            dom = {p.rate_d + p.rate_common, p.rate_u + p.rate_common};
            break;
        }
        case Kind::storage_induced: {
            const auto& p = std::get<Storage>(data_);
            const double edge = -p.model.phi_min();
            dom = {edge, edge};
            break;
        }
        default:
            break;  // empirical averages are always finite
    }
    if (swap_roles_) std::swap(dom.sup_a, dom.sup_b);
    return dom;
}

const std::vector<std::pair<double, double>>& SojournLaw::pair_samples(int min_count) const {
    if (kind_ == Kind::empirical) return std::get<Empirical>(data_).samples;
    if (kind_ != Kind::storage_induced)
        throw UnsupportedKind("pair_samples: closed-form kinds are not sampled");
    if (sim_cache_ && static_cast<int>(sim_cache_->size()) >= min_count) return *sim_cache_;
    const auto& p = std::get<Storage>(data_);
    // Deterministic seed derived from the parameters keeps lattices and
    // repeated CDF evaluations reproducible.
    std::uint64_t seed = 0x0cc7;
    seed = mix_bits(seed, p.tau);
    seed = mix_bits(seed, p.model.phi(1.0));
    seed = mix_bits(seed, p.model.phi(2.5));
    Rng rng(seed);
    auto cyc = simulate_storage_cycles(p.model, p.tau, min_count, rng);
    auto fresh = std::make_shared<std::vector<std::pair<double, double>>>();
    fresh->reserve(cyc.size());
    for (const auto& c : cyc) fresh->emplace_back(c.d, c.u);
    sim_cache_ = fresh;
    return *sim_cache_;
}

// --- lattice -----------------------------------------------------------

namespace {

// Index of the cell whose midpoint represents v; exact half-grid atoms go
// to the left edge.
long cell_index(double v, double h) {
    const double r = v / h;
    const long k = static_cast<long>(std::ceil(r - 0.5 - 1e-12));
    return std::max(0L, k);
}

std::vector<double> marginal_lattice(const Marginal& m, double h, int n) {
    std::vector<double> out(static_cast<size_t>(n), 0.0);
    if (m.name() == "deterministic") {
        const long k = cell_index(m.mean(), h);
        if (k < n) out[static_cast<size_t>(k)] = 1.0;
        return out;
    }
    double prev = 0.0;
    for (int k = 0; k < n; ++k) {
        const double hi = m.cdf((k + 0.5) * h);
        out[static_cast<size_t>(k)] = hi - prev;
        prev = hi;
    }
    return out;
}

}  // namespace

std::vector<double> SojournLaw::lattice_marginal(bool want_u, double h, int n) const {
    switch (kind_) {
        case Kind::independent: {
            const auto& p = std::get<Independent>(data_);
            return marginal_lattice(want_u ? p.u : p.d, h, n);
        }
        case Kind::marshall_olkin: {
            const auto& p = std::get<MarshallOlkin>(data_);
            const double rate = (want_u ? p.rate_u : p.rate_d) + p.rate_common;
            return marginal_lattice(Marginal::exponential(rate), h, n);
        }
        default: {
            std::vector<double> out(static_cast<size_t>(n), 0.0);
            const auto& s = pair_samples();
            const double w = 1.0 / static_cast<double>(s.size());
            for (const auto& [d, u] : s) {
                const long k = cell_index(want_u ? u : d, h);
                if (k < n) out[static_cast<size_t>(k)] += w;
            }
            return out;
        }
    }
}

std::vector<double> SojournLaw::lattice_D(double h, int n) const {
    return lattice_marginal(swap_roles_, h, n);
}

std::vector<double> SojournLaw::lattice_U(double h, int n) const {
    return lattice_marginal(!swap_roles_, h, n);
}

std::vector<double> SojournLaw::lattice_joint(double h, int nx, int ny) const {
    std::vector<double> out(static_cast<size_t>(nx) * static_cast<size_t>(ny), 0.0);
    auto at = [&](long i, long j) -> double& {
        return out[static_cast<size_t>(i) * static_cast<size_t>(ny) + static_cast<size_t>(j)];
    };
    const Kind k = kind_;
    if (k == Kind::independent) {
        const auto fd = lattice_D(h, nx);
        const auto fu = lattice_U(h, ny);
        for (long i = 0; i < nx; ++i)
            for (long j = 0; j < ny; ++j) at(i, j) = fd[static_cast<size_t>(i)] * fu[static_cast<size_t>(j)];
        return out;
    }
    if (k == Kind::marshall_olkin) {
        const auto& p = std::get<MarshallOlkin>(data_);
        const double ld = swap_roles_ ? p.rate_u : p.rate_d;
        const double lu = swap_roles_ ? p.rate_d : p.rate_u;
        const double lc = p.rate_common;
        auto survival = [&](double s, double t) {
            return std::exp(-ld * s - lu * t - lc * std::max(s, t));
        };
        // rectangle mass by inclusion-exclusion on the survival function
        for (long i = 0; i < nx; ++i) {
            const double a = std::max(0.0, (i - 0.5) * h);
            const double b = (i + 0.5) * h;
            for (long j = 0; j < ny; ++j) {
                const double c = std::max(0.0, (j - 0.5) * h);
                const double d = (j + 0.5) * h;
                at(i, j) = survival(a, c) - survival(b, c) - survival(a, d) + survival(b, d);
            }
        }
        return out;
    }
    const auto& s = pair_samples();
    const double w = 1.0 / static_cast<double>(s.size());
    for (const auto& [dv, uv] : s) {
        const double first = swap_roles_ ? uv : dv;
        const double second = swap_roles_ ? dv : uv;
        const long i = cell_index(first, h);
        const long j = cell_index(second, h);
        if (i < nx && j < ny) at(i, j) += w;
    }
    return out;
}

double SojournLaw::default_lattice_step() const {
    const auto ms = moments();
    return std::min(ms.alpha, ms.beta) / 50.0;
}

const LevyModel& SojournLaw::storage_model() const {
    if (kind_ != Kind::storage_induced)
        throw UnsupportedKind("storage_model: not a storage-induced law");
    return std::get<Storage>(data_).model;
}

double SojournLaw::storage_tau() const {
    if (kind_ != Kind::storage_induced)
        throw UnsupportedKind("storage_tau: not a storage-induced law");
    return std::get<Storage>(data_).tau;
}

}  // namespace occt
