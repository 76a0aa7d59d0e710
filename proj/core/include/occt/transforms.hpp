#pragma once

#include <complex>
#include <functional>

#include "occt/inversion.hpp"
#include "occt/sojourn_law.hpp"

namespace occt {

// Double transform of the occupation time of A for the alternating process
// started in A:
//   int_0^inf e^{-qt} E e^{-theta alpha(t)} dt
//     = [ (1 - L1(q+th))/(q+th) + (L1(q+th) - L12(q+th, q))/q ]
//       / (1 - L12(q+th, q)).
// Value lies in (0, 1/q]; theta = 0 collapses to 1/q identically.
double alpha_double_transform(const SojournLaw& law, double theta, double q);
std::complex<double> alpha_double_transform(const SojournLaw& law, std::complex<double> theta,
                                            std::complex<double> q);

// The two summands of q * E e^{-theta alpha(e_q)} split by whether the
// process has left A (resp. B) by the exponential clock; used as a test
// decomposition and by the availability transforms at theta = 0.
std::pair<double, double> alpha_transform_split(const SojournLaw& law, double theta, double q);

// Transforms of the availability function:
//   in_A = (1/q) (1 - L1(q)) / (1 - L12(q, q)),
//   in_B = (1/q) (L1(q) - L12(q, q)) / (1 - L12(q, q));
// they sum to 1/q.
std::pair<double, double> availability_transforms(const SojournLaw& law, double q);

// P(X(t) in A | X(0) in A) by inverting the in_A transform.
InversionResult availability_at(const SojournLaw& law, double t, const InversionConfig& cfg = {});

// Double-transform evaluator (theta, q) -> value used by the iterated
// inversion below; must accept complex arguments on both axes.
using DoubleTransformFn =
    std::function<std::complex<double>(std::complex<double>, std::complex<double>)>;

// P(alpha(t) <= x) from the double transform: the inner inversion in q at
// fixed theta recovers g_t(theta) = E e^{-theta alpha(t)}; the outer
// inversion of g_t(theta)/theta at x yields the CDF, clamped to [0, 1].
// x <= 0 returns 0 and x >= t returns 1 (a.s. bounds; the transform rings
// at the atom x = t).
InversionResult occupation_cdf_via_inversion(const DoubleTransformFn& source, double t, double x,
                                             const InversionConfig& cfg = {});

// Convenience composition for a sojourn law.
InversionResult occupation_cdf_from_law(const SojournLaw& law, double t, double x,
                                        const InversionConfig& cfg = {});

}  // namespace occt
