#pragma once

#include <complex>
#include <functional>

namespace occt {

// Numerical inversion of Laplace transforms f(t) = L^{-1}[fhat](t).
//
// Two algorithms are provided:
//  * Euler summation (Abate/Whitt): trapezoidal discretization of the
//    Bromwich integral accelerated by binomial averaging of partial sums.
//    Requires fhat on a vertical line in the right half plane.
//  * Fixed Talbot (Abate/Valko): deformed contour, excellent for transforms
//    that are analytic away from the negative real axis.
//
// Euler is the default; it is robust for probability CDFs and availability
// functions whose time-domain images are bounded and piecewise smooth.

enum class InversionAlgorithm { euler_summation, talbot };

struct InversionConfig {
    InversionAlgorithm algorithm = InversionAlgorithm::euler_summation;
    int terms = 41;            // partial sums kept before Euler averaging
    int euler_order = 12;      // binomial averaging order
    double target_abs_tol = 1e-8;
    double contour_scale = 1.0;  // Talbot radius multiplier

    void validate() const;
};

struct InversionResult {
    double value = 0.0;
    double abs_error_estimate = 0.0;
    bool accuracy_reached = true;

    operator double() const { return value; }
};

using TransformFn = std::function<std::complex<double>(std::complex<double>)>;

// Inverts fhat at t > 0. Soft failure: if the internal error estimate
// exceeds cfg.target_abs_tol the best estimate is returned with
// accuracy_reached = false.
InversionResult invert(const TransformFn& fhat, double t, const InversionConfig& cfg = {});

// Euler-summation inversion of a transform whose time-domain original is
// complex-valued (the inner pass of the iterated double-transform
// inversion). The conjugate-symmetry folding of the real-original formula
// does not apply, so the transform is sampled on both half-lines.
struct ComplexInversionResult {
    std::complex<double> value;
    double abs_error_estimate = 0.0;
    bool accuracy_reached = true;
};
ComplexInversionResult invert_complex(const TransformFn& fhat, double t,
                                      const InversionConfig& cfg = {});

}  // namespace occt
