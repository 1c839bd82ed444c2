#ifndef NCGAMMA_QUADRATURE_HPP
#define NCGAMMA_QUADRATURE_HPP

#include <map>
#include <optional>

#include "ncgamma/params.hpp"
#include "ncgamma/signed_log.hpp"

namespace ncgamma::quadrature {

struct QuadratureControl {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    int max_subdivisions = 200;
    // marker for how semi-infinite ranges are folded; the density integrals
    // use t = u/(1-u), boundary layers inside the U kernel use t = e^tau - 1
    enum class TailMap { ExpSubstitution } infinite_tail_map = TailMap::ExpSubstitution;

    void validate() const {
        if (!(abs_tol > 0) || !(rel_tol > 0))
            throw DomainError("QuadratureControl: tolerances must be > 0");
        if (max_subdivisions < 1)
            throw DomainError("QuadratureControl: max_subdivisions must be >= 1");
    }
};

/// Density via the convolution integral representations, an oracle fully
/// independent of the series path.  Branch selection: the single-Bessel
/// integral when lambda1 = lambda2 > 0 and beta1 = beta2 (difference), the
/// two-Bessel integral when both non-centralities are positive, one-Bessel
/// integrals when exactly one vanishes, and the closed form when both do.
/// Difference at x < 0 goes through the parameter-swap rule.
double pdf_integral(const PairParams& p, double x, const QuadratureControl& qc = {});

namespace detail {
enum class IntegralBranch { TwoBessel, FirstCentral, SecondCentral, EqualScale };
double pdf_integral_branch(const PairParams& p, double x, IntegralBranch branch,
                           const QuadratureControl& qc);
}  // namespace detail

/// Numeric CDF/quantile engine for one parameter set.  Body probability is
/// adaptive quadrature of the exact density (splitting at the origin, with a
/// power-weighted substitution when alpha1+alpha2 <= 1 makes the origin an
/// integrable singularity); beyond self-validated crossover points the tails
/// come from the asymptotic expansions.  Evaluations are cached so repeated
/// calls integrate only the increment.
class CdfEvaluator {
public:
    explicit CdfEvaluator(const PairParams& p, const QuadratureControl& qc = {},
                          const SeriesControl& ctrl = {});

    /// P(X <= x), clamped to [0,1].
    double cdf(double x);

    /// raw value before the [0,1] clamp (noise diagnostics)
    double cdf_unclamped(double x);

    /// x with |cdf(x) - prob| < 1e-8, by bracketed root finding.
    double quantile(double prob);

    double upper_crossover();
    double lower_crossover();

private:
    double density(double x) const;
    double body_integral(double a, double b) const;
    double piece_integral(double a, double b) const;
    double upper_tail(double x) const;  // P(X > x) for x >= upper crossover
    double lower_tail(double x) const;  // P(X <= x), difference, x <= lower crossover
    void ensure_crossovers();

    PairParams p_;
    QuadratureControl qc_;
    SeriesControl ctrl_;
    bool mixture_tail_;  // sum with beta1 == beta2: exact Poisson-gamma tail
    std::optional<double> xc_plus_, xc_minus_;
    int order_plus_ = 6, order_minus_ = 6;
    double f_low_ = 0.0;  // cdf at the left anchor of the cached grid
    std::map<double, double> known_;  // x -> unclamped cdf
};

/// One-shot wrappers.
double cdf_numeric(const PairParams& p, double x, const QuadratureControl& qc = {});
double quantile_numeric(const PairParams& p, double prob, const QuadratureControl& qc = {});

}  // namespace ncgamma::quadrature

#endif
