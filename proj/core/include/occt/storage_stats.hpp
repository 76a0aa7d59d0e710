#pragma once

#include <complex>

#include "occt/inversion.hpp"
#include "occt/scale.hpp"
#include "occt/sojourn_law.hpp"

namespace occt::storage {

// Closed-form occupation-time analytics for a spectrally positive Levy
// process reflected at its infimum, A = [0, tau], started at tau.

// (E D, E U) = ( W(tau)/W'(tau), (psi'(0) - W(tau))/W'(tau) ), W = W^{(0)}.
std::pair<double, double> sojourn_means(const ScaleEvaluator& scale, double tau);

// Joint transform E e^{-th1 D - th2 U} through tilted scale functions at
// rate psi(th2) and index p = th1 - th2. Negative th1 is accepted as long
// as the plain scale index th1 stays above phi_min (analytic continuation
// used by the large-deviations module).
double sojourn_joint_transform(const ScaleEvaluator& scale, double tau, double th1, double th2);
std::complex<double> sojourn_joint_transform(const ScaleEvaluator& scale, double tau,
                                             std::complex<double> th1,
                                             std::complex<double> th2);

// Cycle moment summary. var_U is evaluated both from the closed-form
// expression and from central differences of the joint transform; when the
// two disagree beyond 1e-3 relative the transform value is used and
// var_U_from_transform is set (the shipped closed form carries a known
// misprint risk; the transform is the arbiter).
struct SojournStats {
    MomentSummary summary;
    double var_U_closed_form = 0.0;
    double var_U_transform = 0.0;
    bool disagreement = false;
};
SojournStats sojourn_moments(const ScaleEvaluator& scale, double tau);

// Double transform of the occupation time of [0, tau] for the reflected
// process:
//   int_0^inf e^{-qt} E e^{-theta alpha(t)} dt
//     = (1/q) psi(q) Z_tilt(tau) / (theta W_tilt(tau) + psi(q) Z_tilt(tau))
// with the tilt at rate psi(q) and index theta.
double occupation_double_transform(const ScaleEvaluator& scale, double tau, double theta,
                                   double q);
std::complex<double> occupation_double_transform(const ScaleEvaluator& scale, double tau,
                                                 std::complex<double> theta,
                                                 std::complex<double> q);

// tau -> infinity limit: occupation of (-infty, 0] for the free process,
// (1/q) psi(q) / psi(q + theta).
double free_occupation_double_transform(const LevyModel& model, double theta, double q);

// Reflected Brownian motion specialization, evaluated directly with
// sinh/cosh. mu is the drift of X (mu < 0 stable; mu = 0 permitted).
double rbm_double_transform(double mu, double sigma2, double tau, double theta, double q);
std::complex<double> rbm_double_transform(double mu, double sigma2, double tau,
                                          std::complex<double> theta, std::complex<double> q);

// Density of the occupation time of (-infty, 0] up to t for a free Brownian
// motion with drift mu and unit variance (general sigma by rescaling
// (t, u, mu) -> (t/sigma2 ... ) documented at the definition). 0 < u < t.
double bm_free_occupation_density(double mu, double t, double u);

// P(alpha(t) <= x) for the reflected process by iterated inversion of the
// double transform.
InversionResult occupation_cdf(const ScaleEvaluator& scale, double tau, double t, double x,
                               const InversionConfig& cfg = {});

}  // namespace occt::storage
