#ifndef NCGAMMA_SPECFUN_HPP
#define NCGAMMA_SPECFUN_HPP

#include "ncgamma/signed_log.hpp"

namespace ncgamma::specfun {

/// log|Gamma(x)| with the sign of Gamma(x); reflection handles x < 0.
/// Throws PoleError at non-positive integers.
SignedLogValue log_gamma(double x);

/// 1/Gamma(x); returns exact zero at the poles (x = 0, -1, -2, ...).
SignedLogValue reciprocal_gamma(double x);

/// Pochhammer symbol (a)_n = a(a+1)...(a+n-1); (a)_0 = 1, exact zero when
/// a is a non-positive integer with |a| < n.
SignedLogValue pochhammer(double a, int n);

/// Kummer's confluent hypergeometric function M(a,b,x).  Negative arguments
/// are routed through M(a,b,x) = e^x M(b-a,b,-x) so the summed series has
/// positive argument.  b must not be a non-positive integer.
SignedLogValue kummer_m(double a, double b, double x, const SeriesControl& ctrl = {});

/// Tricomi's confluent hypergeometric function U(a,b,x) for x > 0.
/// Non-positive integer a uses the finite Laguerre form
/// U(-n,b,x) = (-1)^n n! L_n^{(b-1)}(x); otherwise b < 1 is first mapped
/// through U(a,b,x) = x^{1-b} U(a-b+1, 2-b, x) and the normalized call is
/// evaluated by adaptive quadrature of the exponential-integral
/// representation when a > 0, else by the two-M connection formula.
SignedLogValue tricomi_u(double a, double b, double x, const SeriesControl& ctrl = {});

/// Modified Bessel function of the first kind I_nu(x), nu > -1, x >= 0.
/// Ascending series for moderate x, the large-x expansion
/// I_nu(x) ~ e^x/sqrt(2 pi x) * sum_k ... beyond x = max(30, 2 nu^2).
SignedLogValue bessel_i(double nu, double x, const SeriesControl& ctrl = {});

/// Modified Bessel function of the second kind K_nu(x), x > 0, computed via
/// K_nu(x) = sqrt(pi) (2x)^nu e^{-x} U(nu+1/2, 2nu+1, 2x).
SignedLogValue bessel_k(double nu, double x, const SeriesControl& ctrl = {});

/// Generalized Laguerre polynomial L_n^{(alpha)}(x) by the three-term
/// recurrence in n.
double laguerre(int n, double alpha, double x);

/// H_{2k}(i*y) for the physicist's Hermite polynomials, which is real for
/// real y: H_{2k}(i y) = (-1)^k 4^k k! L_k^{(-1/2)}(-y^2).
double hermite_even_imag(int k, double y);

namespace detail {

/// true when x is within `tol` of an integer
bool is_integer(double x, double tol = 1e-9);

/// U(a,b,x) skipping the finite-Laguerre shortcut (test hook).
SignedLogValue tricomi_u_generic(double a, double b, double x, const SeriesControl& ctrl);

/// Bessel I branch internals, exposed for the crossover-seam test.
SignedLogValue bessel_i_series(double nu, double x, const SeriesControl& ctrl);
SignedLogValue bessel_i_asymptotic(double nu, double x, const SeriesControl& ctrl);

/// Laguerre recurrence with overflow rescaling, as (sign, log) result.
SignedLogValue laguerre_log(int n, double alpha, double x);

/// Regularized upper incomplete gamma Q(a,x), a > 0, x >= 0.
double reg_gamma_q(double a, double x);

}  // namespace detail

}  // namespace ncgamma::specfun

#endif
