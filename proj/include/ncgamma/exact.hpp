#ifndef NCGAMMA_EXACT_HPP
#define NCGAMMA_EXACT_HPP

#include "ncgamma/params.hpp"
#include "ncgamma/signed_log.hpp"

namespace ncgamma::exact {

/// Behavior of the density at x = 0, decided purely by the sign of
/// alpha1+alpha2-1.  For a power singularity f(x) ~ C |x|^{a1+a2-1};
/// for a log singularity f(x) ~ -C ln|x|; Bounded carries f(0) itself.
/// For the difference the side-dependent constant is the x -> 0+ one;
/// approach from below by swapping the parameter pair.
struct OriginBehavior {
    enum class Regime { PowerSingularity, LogSingularity, Bounded };
    Regime regime;
    double exponent_or_value;  // alpha1+alpha2-1 for power, f(0) for bounded
    double coefficient;        // limiting-form constant
};

/// Density of a single non-central gamma variable Gamma(alpha, beta, lambda)
/// via the closed Bessel-I form; plain gamma density when lambda = 0.
/// Returns 0 for x <= 0.
double pdf_ncg(double alpha, double beta, double lambda, double x,
               const SeriesControl& ctrl = {});

/// Exact density of X1+X2 or X1-X2 by the confluent-hypergeometric series,
/// with automatic dispatch to the closed-form reductions (equal scales,
/// vanishing non-centralities, variance-gamma / McKay special cases, the
/// single-Bessel series for lambda1=lambda2, beta1=beta2).
double pdf_exact(const PairParams& p, double x, const SeriesControl& ctrl = {});

/// Finite-series closed form for the difference density: requires
/// (lambda1 = 0, alpha1 a positive integer, x > 0) or the mirrored
/// (lambda2 = 0, alpha2 a positive integer, x < 0).  Exact, no truncation.
double pdf_finite_series(const PairParams& p, double x);

/// Value/limit classification of the density at the origin.
OriginBehavior pdf_at_origin(const PairParams& p, const SeriesControl& ctrl = {});

/// Map w1*V1 +/- w2*V2 for independent non-central chi-square V_i
/// (r_i degrees of freedom, non-centrality l_i) onto PairParams.
PairParams from_chisquare(double r1, double r2, double w1, double w2,
                          double l1, double l2, Kind kind);

/// Map the sum of n independent copies of a correlated-normal product onto
/// the difference parameterization.  The scale s = sigma_x*sigma_y follows
/// the usual convention for this representation.
PairParams from_product_normal(const CorrelatedNormalParams& c);

namespace detail {

/// Forced evaluation paths, bypassing dispatch; used to cross-test the
/// closed-form reductions against the generic series.
double pdf_diff_double_series(const PairParams& p, double x, const SeriesControl& ctrl);
double pdf_sum_double_series(const PairParams& p, double x, const SeriesControl& ctrl);
double pdf_diff_bessel_series(const PairParams& p, double x, const SeriesControl& ctrl);  // Thm 2.3 form
double pdf_diff_variance_gamma(const PairParams& p, double x, const SeriesControl& ctrl);
double pdf_sum_mckay(const PairParams& p, double x, const SeriesControl& ctrl);
double pdf_diff_single_term(const PairParams& p, double x, const SeriesControl& ctrl);

/// Horn Psi2 double series, summed along anti-diagonals (terms are
/// positive for x,y >= 0, so partial sums increase monotonically).
SignedLogValue horn_psi2(double a, double b1, double b2, double x, double y,
                         const SeriesControl& ctrl);

}  // namespace detail

}  // namespace ncgamma::exact

#endif
