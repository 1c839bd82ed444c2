#ifndef NCGAMMA_ASYMPTOTICS_HPP
#define NCGAMMA_ASYMPTOTICS_HPP

#include <vector>

#include "ncgamma/params.hpp"

namespace ncgamma::asympt {

enum class Side { PlusInfinity, MinusInfinity };
enum class Tail { Upper, Lower };

/// An evaluated expansion: log of the positive prefactor at the evaluation
/// point, the coefficient list, and the order used.  coefficients[0] = 1
/// in every family.
struct AsymptoticApprox {
    enum class Family { PdfNoncentral, PdfCentral, TailNoncentral, TailCentral };
    double leading_log;
    std::vector<double> coefficients;
    int order;
    Family family;

    /// prefactor * sum_l coefficients[l] / x^{l/2} (noncentral families)
    /// or / x^l (central families), at |x|.
    double evaluate(double abs_x) const;
};

/// Coefficient c_l of the noncentral pdf expansion (lambda1 > 0; for the
/// sum additionally beta1 > beta2).  The +/- sign convention is bound to
/// the kind: difference takes (1/beta2 + 1/beta1), sum (1/beta2 - 1/beta1).
double coeff_c(int l, const PairParams& p);

/// Coefficient d_k of the central pdf expansion (lambda1 = 0); exactly 0
/// for k >= alpha1 when alpha1 is a positive integer.
double coeff_d(int k, const PairParams& p);

/// Coefficient gamma_p of the noncentral tail expansion (constrained sum
/// over i+2j+k+l = p with generalized binomials).
double coeff_gamma(int pord, const PairParams& p);

/// Coefficient delta_k of the central tail expansion:
/// sum_{s=0}^{k} (-beta1)^{k-s} (k+1-alpha1)_{k-s} d_s.
double coeff_delta(int k, const PairParams& p);

/// Expansion of the density at large |x|; MinusInfinity (difference only)
/// is evaluated by the parameter-swap rule, never re-derived.
AsymptoticApprox pdf_expansion(const PairParams& p, Side side, double x, int order);
double pdf_asymptotic(const PairParams& p, Side side, double x, int order);

/// Tail approximation: P(X1 -/+ X2 > x) on the PlusInfinity side, F(x) on
/// the MinusInfinity side (difference only).
AsymptoticApprox tail_expansion(const PairParams& p, Side side, double x, int order);
double tail_asymptotic(const PairParams& p, Side side, double x, int order);

/// Explicit log/log-log quantile approximation.  Upper: prob near 1.
/// Lower (difference only): prob near 0, obtained from the upper-tail
/// formula of the swapped pair with a sign flip.
double quantile_asymptotic(const PairParams& p, double prob, Tail tail);

/// Corollary coefficients for the sum of n correlated-normal products.
/// The Laguerre-form c-family requires r_x + r_y != 0; r_x + r_y = 0
/// switches to the d-family.
double coeff_c_product_normal(int l, const CorrelatedNormalParams& c);
double coeff_d_product_normal(int k, const CorrelatedNormalParams& c);

/// n = 1 Hermite-polynomial forms of the same coefficients.
double coeff_c_product_normal_hermite(int l, const CorrelatedNormalParams& c);
double coeff_d_product_normal_hermite(int k, const CorrelatedNormalParams& c);

/// Density expansion for the product-normal sum, evaluated from its own
/// closed-form prefactor and coefficients; agrees term-by-term with
/// pdf_asymptotic(from_product_normal(c), ...).
double pdf_asymptotic_product_normal(const CorrelatedNormalParams& c, Side side,
                                     double x, int order);

/// Default expansion order used by the reproduction harness; higher orders
/// (up to 12) are allowed but lose accuracy at small |x|.
inline constexpr int kDefaultOrder = 2;
inline constexpr int kMaxOrder = 12;

}  // namespace ncgamma::asympt

#endif
