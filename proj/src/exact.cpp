#include "ncgamma/exact.hpp"

#include <cmath>

#include "ncgamma/errors.hpp"
#include "ncgamma/specfun.hpp"

namespace ncgamma::exact {

namespace {

constexpr double kPi = 3.14159265358979323846;

using specfun::bessel_i;
using specfun::bessel_k;
using specfun::kummer_m;
using specfun::log_gamma;
using specfun::tricomi_u;

SignedLogValue slv_exp(double log_value) { return SignedLogValue::from_log(log_value, +1); }

// lambda^n with 0^0 = 1, as required when a non-centrality vanishes
SignedLogValue nc_pow(double lambda, int n) {
    if (n == 0) return SignedLogValue::one();
    if (lambda == 0.0) return SignedLogValue::zero();
    return slv_exp(n * std::log(lambda));
}

double finish_density(const SignedLogValue& v, const char* what) {
    if (v.is_zero()) return 0.0;
    if (v.sign < 0 && v.log_abs > -60.0)
        throw NonConvergence(std::string(what) + ": series lost positivity");
    const double d = v.to_real();
    return d < 0 ? 0.0 : d;
}

// ---------------------------------------------------------------------------
// difference density, x != 0
// ---------------------------------------------------------------------------

struct DiffSide {
    double abs_x;
    double scale;      // b(x): beta1 for x > 0, beta2 for x < 0
    bool right;        // x > 0
    double a_jk(const PairParams& p, int j, int k) const {
        return right ? p.alpha1 + k - j : p.alpha2 + j;
    }
};

DiffSide diff_side(const PairParams& p, double x) {
    return {std::fabs(x), x > 0 ? p.beta1 : p.beta2, x > 0};
}

SignedLogValue diff_prefactor(const PairParams& p, const DiffSide& s) {
    const double w = 1.0 / p.beta1 + 1.0 / p.beta2;
    const double lp = -p.alpha1 * std::log(p.beta1) - p.alpha2 * std::log(p.beta2) -
                      p.lambda1 - p.lambda2 - s.abs_x / s.scale +
                      (1.0 - p.alpha1 - p.alpha2) * std::log(w);
    return slv_exp(lp);
}

double diff_double_series(const PairParams& p, double x, const SeriesControl& ctrl) {
    const DiffSide s = diff_side(p, x);
    const double w = 1.0 / p.beta1 + 1.0 / p.beta2;
    const double asum = p.alpha1 + p.alpha2;
    const double lb1 = std::log(p.beta1), lb2 = std::log(p.beta2), lw = std::log(w);

    SeriesAccumulator acc(ctrl);
    for (int k = 0;; ++k) {
        SignedLogValue layer = SignedLogValue::zero();
        for (int j = 0; j <= k; ++j) {
            SignedLogValue coef = nc_pow(p.lambda1, k - j) * nc_pow(p.lambda2, j);
            if (coef.is_zero()) continue;
            const double a = s.a_jk(p, j, k);
            const double lc = -std::lgamma(j + 1.0) - std::lgamma(k - j + 1.0) -
                              std::lgamma(a) + (j - k) * lb1 - j * lb2 - k * lw;
            coef *= slv_exp(lc);
            coef *= tricomi_u(1.0 - a, 2.0 - asum - k, w * s.abs_x, ctrl);
            layer += coef;
        }
        if (acc.add(layer)) break;
        if (acc.exhausted())
            throw NonConvergence("pdf_exact: difference series did not converge");
    }
    return finish_density(diff_prefactor(p, s) * acc.sum(), "pdf_exact(diff)");
}

// single series remaining when one non-centrality vanishes; `first_zero`
// selects which of the two lambdas is zero
double diff_single_series(const PairParams& p, double x, const SeriesControl& ctrl,
                          bool first_zero) {
    const DiffSide s = diff_side(p, x);
    const double w = 1.0 / p.beta1 + 1.0 / p.beta2;
    const double asum = p.alpha1 + p.alpha2;
    const double rate = first_zero ? p.lambda2 / p.beta2 : p.lambda1 / p.beta1;
    const double lrate = rate > 0 ? std::log(rate) : 0.0;
    const double lw = std::log(w);

    SeriesAccumulator acc(ctrl);
    for (int k = 0;; ++k) {
        const double a = first_zero ? s.a_jk(p, k, k) : s.a_jk(p, 0, k);
        const double lc = -std::lgamma(k + 1.0) - std::lgamma(a) + k * (lrate - lw);
        SignedLogValue term = (k > 0 && rate == 0.0) ? SignedLogValue::zero() : slv_exp(lc);
        if (!term.is_zero())
            term *= tricomi_u(1.0 - a, 2.0 - asum - k, w * s.abs_x, ctrl);
        if (acc.add(term)) break;
        if (acc.exhausted())
            throw NonConvergence("pdf_exact: difference series did not converge");
    }
    return finish_density(diff_prefactor(p, s) * acc.sum(), "pdf_exact(diff)");
}

double diff_single_term(const PairParams& p, double x, const SeriesControl& ctrl) {
    const DiffSide s = diff_side(p, x);
    const double w = 1.0 / p.beta1 + 1.0 / p.beta2;
    const double a = s.a_jk(p, 0, 0);
    SignedLogValue v = diff_prefactor(p, s);
    v *= slv_exp(-std::lgamma(a));
    v *= tricomi_u(1.0 - a, 2.0 - p.alpha1 - p.alpha2, w * s.abs_x, ctrl);
    return finish_density(v, "pdf_exact(diff)");
}

// equal shapes, central case: variance-gamma closed form in K_{alpha-1/2}
double diff_variance_gamma(const PairParams& p, double x, const SeriesControl& ctrl) {
    const double alpha = p.alpha1;
    const double w = 1.0 / p.beta1 + 1.0 / p.beta2;
    const double ax = std::fabs(x);
    const double lp = -alpha * (std::log(p.beta1) + std::log(p.beta2)) -
                      0.5 * std::log(kPi) - std::lgamma(alpha) +
                      (0.5 - alpha) * std::log(w) +
                      0.5 * (1.0 / p.beta2 - 1.0 / p.beta1) * x +
                      (alpha - 0.5) * std::log(ax);
    return finish_density(slv_exp(lp) * bessel_k(alpha - 0.5, 0.5 * w * ax, ctrl),
                          "pdf_exact(vg)");
}

// lambda1 = lambda2, beta1 = beta2: single series of K Bessel terms
double diff_bessel_series(const PairParams& p, double x, const SeriesControl& ctrl) {
    const double beta = p.beta1;
    const double lambda = p.lambda1;
    const double asum = p.alpha1 + p.alpha2;
    const double ax = std::fabs(x);
    const double lhalf = std::log(0.5 * ax / beta);

    SeriesAccumulator acc(ctrl);
    for (int k = 0;; ++k) {
        SignedLogValue term = nc_pow(2.0 * lambda, k);
        if (!(k > 0 && term.is_zero())) {
            term *= slv_exp(-std::lgamma(k + 1.0) - std::lgamma(asum + k) +
                            (asum + k - 0.5) * lhalf);
            term *= bessel_k(asum + k - 0.5, ax / beta, ctrl);
        }
        if (acc.add(term)) break;
        if (acc.exhausted())
            throw NonConvergence("pdf_exact: Bessel series did not converge");
    }
    const double lp = -2.0 * lambda - std::log(beta) - 0.5 * std::log(kPi);
    return finish_density(slv_exp(lp) * acc.sum(), "pdf_exact(diff)");
}

// ---------------------------------------------------------------------------
// sum density, x > 0
// ---------------------------------------------------------------------------

SignedLogValue sum_prefactor(const PairParams& p, double x) {
    const double lp = -p.alpha1 * std::log(p.beta1) - p.alpha2 * std::log(p.beta2) -
                      p.lambda1 - p.lambda2 - x / p.beta1 +
                      (p.alpha1 + p.alpha2 - 1.0) * std::log(x);
    return slv_exp(lp);
}

double sum_double_series(const PairParams& p, double x, const SeriesControl& ctrl) {
    const double asum = p.alpha1 + p.alpha2;
    const double wm = 1.0 / p.beta1 - 1.0 / p.beta2;
    const double lb1 = std::log(p.beta1), lb2 = std::log(p.beta2), lx = std::log(x);

    SeriesAccumulator acc(ctrl);
    for (int k = 0;; ++k) {
        SignedLogValue layer = SignedLogValue::zero();
        for (int j = 0; j <= k; ++j) {
            SignedLogValue coef = nc_pow(p.lambda1, k - j) * nc_pow(p.lambda2, j);
            if (coef.is_zero()) continue;
            const double lc = -std::lgamma(j + 1.0) - std::lgamma(k - j + 1.0) -
                              std::lgamma(asum + k) + k * lx + (j - k) * lb1 - j * lb2;
            coef *= slv_exp(lc);
            coef *= kummer_m(p.alpha2 + j, asum + k, wm * x, ctrl);
            layer += coef;
        }
        if (acc.add(layer)) break;
        if (acc.exhausted())
            throw NonConvergence("pdf_exact: sum series did not converge");
    }
    return finish_density(sum_prefactor(p, x) * acc.sum(), "pdf_exact(sum)");
}

double sum_single_series(const PairParams& p, double x, const SeriesControl& ctrl,
                         bool first_zero) {
    const double asum = p.alpha1 + p.alpha2;
    const double wm = 1.0 / p.beta1 - 1.0 / p.beta2;
    const double rate = first_zero ? p.lambda2 * x / p.beta2 : p.lambda1 * x / p.beta1;
    const double lrate = rate > 0 ? std::log(rate) : 0.0;

    SeriesAccumulator acc(ctrl);
    for (int k = 0;; ++k) {
        SignedLogValue term = (k > 0 && rate == 0.0)
                                  ? SignedLogValue::zero()
                                  : slv_exp(k * lrate - std::lgamma(k + 1.0) -
                                            std::lgamma(asum + k));
        if (!term.is_zero()) {
            const double a = first_zero ? p.alpha2 + k : p.alpha2;
            term *= kummer_m(a, asum + k, wm * x, ctrl);
        }
        if (acc.add(term)) break;
        if (acc.exhausted())
            throw NonConvergence("pdf_exact: sum series did not converge");
    }
    return finish_density(sum_prefactor(p, x) * acc.sum(), "pdf_exact(sum)");
}

double sum_single_term(const PairParams& p, double x, const SeriesControl& ctrl) {
    const double asum = p.alpha1 + p.alpha2;
    const double wm = 1.0 / p.beta1 - 1.0 / p.beta2;
    SignedLogValue v = sum_prefactor(p, x) * slv_exp(-std::lgamma(asum));
    v *= kummer_m(p.alpha2, asum, wm * x, ctrl);
    return finish_density(v, "pdf_exact(sum)");
}

// equal shapes, central case with distinct scales: McKay Type I density
double sum_mckay(const PairParams& p, double x, const SeriesControl& ctrl) {
    const double alpha = p.alpha1;
    const double wm = std::fabs(1.0 / p.beta1 - 1.0 / p.beta2);
    const double lp = std::lgamma(alpha + 0.5) - std::lgamma(2.0 * alpha) -
                      alpha * (std::log(p.beta1) + std::log(p.beta2)) +
                      (0.5 - alpha) * std::log(wm) + (alpha - 0.5) * std::log(2.0 * x) -
                      0.5 * (1.0 / p.beta1 + 1.0 / p.beta2) * x;
    return finish_density(slv_exp(lp) * bessel_i(alpha - 0.5, 0.5 * wm * x, ctrl),
                          "pdf_exact(sum)");
}

}  // namespace

double pdf_ncg(double alpha, double beta, double lambda, double x, const SeriesControl& ctrl) {
    if (!(alpha > 0) || !(beta > 0) || lambda < 0)
        throw DomainError("pdf_ncg: requires alpha, beta > 0 and lambda >= 0");
    if (x <= 0) return 0.0;
    if (lambda == 0.0) {
        const double l = (alpha - 1.0) * std::log(x) - x / beta -
                         alpha * std::log(beta) - std::lgamma(alpha);
        return std::exp(l);
    }
    const double l = -std::log(beta) - lambda - x / beta +
                     0.5 * (alpha - 1.0) * (std::log(x) - std::log(beta) - std::log(lambda));
    SignedLogValue v = slv_exp(l) * bessel_i(alpha - 1.0, 2.0 * std::sqrt(lambda * x / beta), ctrl);
    return finish_density(v, "pdf_ncg");
}

double pdf_exact(const PairParams& p, double x, const SeriesControl& ctrl) {
    p.validate();
    ctrl.validate();
    if (p.kind == Kind::Sum) {
        if (x <= 0) return 0.0;
        if (p.beta1 == p.beta2)
            return pdf_ncg(p.alpha1 + p.alpha2, p.beta1, p.lambda1 + p.lambda2, x, ctrl);
        if (p.lambda1 == 0.0 && p.lambda2 == 0.0) {
            if (p.alpha1 == p.alpha2) return sum_mckay(p, x, ctrl);
            return sum_single_term(p, x, ctrl);
        }
        if (p.lambda1 == 0.0) return sum_single_series(p, x, ctrl, true);
        if (p.lambda2 == 0.0) return sum_single_series(p, x, ctrl, false);
        return sum_double_series(p, x, ctrl);
    }

    if (x == 0.0) {
        if (p.alpha1 + p.alpha2 > 1.0) return pdf_at_origin(p, ctrl).exponent_or_value;
        throw DomainError("pdf_exact: density is singular at x = 0 for alpha1+alpha2 <= 1");
    }
    if (p.lambda1 == 0.0 && p.lambda2 == 0.0) {
        if (p.alpha1 == p.alpha2) return diff_variance_gamma(p, x, ctrl);
        return diff_single_term(p, x, ctrl);
    }
    if (p.lambda1 == p.lambda2 && p.beta1 == p.beta2)
        return diff_bessel_series(p, x, ctrl);
    if (p.lambda1 == 0.0) return diff_single_series(p, x, ctrl, true);
    if (p.lambda2 == 0.0) return diff_single_series(p, x, ctrl, false);
    return diff_double_series(p, x, ctrl);
}

double pdf_finite_series(const PairParams& p, double x) {
    p.validate();
    if (p.kind != Kind::Difference)
        throw DomainError("pdf_finite_series: only defined for the difference");

    // mirrored branch: reuse the x > 0 formula on the swapped pair
    if (x < 0) return pdf_finite_series(p.swapped(), -x);
    if (x == 0.0) throw DomainError("pdf_finite_series: requires x != 0");

    if (p.lambda1 != 0.0 || !specfun::detail::is_integer(p.alpha1) || p.alpha1 < 1)
        throw DomainError(
            "pdf_finite_series: requires lambda1 = 0 and alpha1 a positive integer for x > 0");

    const int n = static_cast<int>(std::llround(p.alpha1));
    const double w = 1.0 / p.beta1 + 1.0 / p.beta2;
    const double arg = -p.lambda2 * p.beta1 / (p.beta1 + p.beta2);

    double series = 0.0;
    for (int k = 0; k <= n - 1; ++k) {
        const double u_k = ((k % 2 == 0) ? 1.0 : -1.0) *
                           specfun::pochhammer(1.0 - n, k).to_real() *
                           std::pow(w, -k) * specfun::laguerre(k, p.alpha2 - 1.0, arg);
        series += u_k * std::pow(x, -k);
    }
    const double lp = -n * std::log(p.beta1) - p.alpha2 * std::log(p.beta2) -
                      std::lgamma(static_cast<double>(n)) - p.alpha2 * std::log(w) +
                      (n - 1.0) * std::log(x) - x / p.beta1 -
                      p.lambda2 * p.beta2 / (p.beta1 + p.beta2);
    return std::exp(lp) * series;
}

namespace detail {

SignedLogValue horn_psi2(double a, double b1, double b2, double x, double y,
                         const SeriesControl& ctrl) {
    if (x < 0 || y < 0) throw DomainError("horn_psi2: requires x, y >= 0");
    if (x == 0.0) return kummer_m(a, b2, y, ctrl);
    if (y == 0.0) return kummer_m(a, b1, x, ctrl);
    const double lx = std::log(x), ly = std::log(y);

    std::vector<double> lpb1{0.0}, lpb2{0.0};  // log (b)_m, positive parameters
    SeriesAccumulator acc(ctrl);
    SignedLogValue poch_a = SignedLogValue::one();
    for (int d = 0;; ++d) {
        while (static_cast<int>(lpb1.size()) <= d)
            lpb1.push_back(lpb1.back() + std::log(b1 + lpb1.size() - 1.0));
        while (static_cast<int>(lpb2.size()) <= d)
            lpb2.push_back(lpb2.back() + std::log(b2 + lpb2.size() - 1.0));
        SignedLogValue diag = SignedLogValue::zero();
        for (int m = 0; m <= d; ++m) {
            const int nn = d - m;
            diag += slv_exp(m * lx + nn * ly - lpb1[m] - lpb2[nn] -
                            std::lgamma(m + 1.0) - std::lgamma(nn + 1.0));
        }
        if (acc.add(poch_a * diag)) break;
        if (acc.exhausted()) throw NonConvergence("horn_psi2: did not converge");
        poch_a *= SignedLogValue::from_real(a + d);
    }
    return acc.sum();
}

double pdf_diff_double_series(const PairParams& p, double x, const SeriesControl& ctrl) {
    return diff_double_series(p, x, ctrl);
}
double pdf_sum_double_series(const PairParams& p, double x, const SeriesControl& ctrl) {
    return sum_double_series(p, x, ctrl);
}
double pdf_diff_bessel_series(const PairParams& p, double x, const SeriesControl& ctrl) {
    return diff_bessel_series(p, x, ctrl);
}
double pdf_diff_variance_gamma(const PairParams& p, double x, const SeriesControl& ctrl) {
    return diff_variance_gamma(p, x, ctrl);
}
double pdf_sum_mckay(const PairParams& p, double x, const SeriesControl& ctrl) {
    return sum_mckay(p, x, ctrl);
}
double pdf_diff_single_term(const PairParams& p, double x, const SeriesControl& ctrl) {
    return diff_single_term(p, x, ctrl);
}

}  // namespace detail

OriginBehavior pdf_at_origin(const PairParams& p, const SeriesControl& ctrl) {
    p.validate();
    const double asum = p.alpha1 + p.alpha2;
    const double lbase = -p.alpha1 * std::log(p.beta1) - p.alpha2 * std::log(p.beta2) -
                         p.lambda1 - p.lambda2;

    if (p.kind == Kind::Sum) {
        // f(x) ~ beta1^{-a1} beta2^{-a2} e^{-l1-l2} x^{a1+a2-1} / Gamma(a1+a2)
        const double c = std::exp(lbase - std::lgamma(asum));
        if (asum < 1.0) return {OriginBehavior::Regime::PowerSingularity, asum - 1.0, c};
        if (asum == 1.0) return {OriginBehavior::Regime::Bounded, c, c};
        return {OriginBehavior::Regime::Bounded, 0.0, c};
    }

    if (asum > 1.0) {
        const double w = 1.0 / p.beta1 + 1.0 / p.beta2;
        const double bsum = p.beta1 + p.beta2;
        SignedLogValue v = slv_exp(lbase + (1.0 - asum) * std::log(w) +
                                   std::lgamma(asum - 1.0) - std::lgamma(p.alpha1) -
                                   std::lgamma(p.alpha2));
        v *= detail::horn_psi2(asum - 1.0, p.alpha1, p.alpha2,
                               p.lambda1 * p.beta2 / bsum, p.lambda2 * p.beta1 / bsum, ctrl);
        const double f0 = v.to_real();
        return {OriginBehavior::Regime::Bounded, f0, f0};
    }

    // side-dependent a_{0,0}: alpha1 for x -> 0+
    const double sin_term = std::sin(kPi * p.alpha1);
    const double c = std::exp(lbase) * sin_term / kPi;
    if (asum == 1.0) return {OriginBehavior::Regime::LogSingularity, asum - 1.0, c};
    return {OriginBehavior::Regime::PowerSingularity, asum - 1.0,
            c * std::exp(std::lgamma(1.0 - asum))};
}

PairParams from_chisquare(double r1, double r2, double w1, double w2, double l1, double l2,
                          Kind kind) {
    if (!(r1 > 0) || !(r2 > 0) || !(w1 > 0) || !(w2 > 0) || l1 < 0 || l2 < 0)
        throw DomainError("from_chisquare: requires r_i, w_i > 0 and l_i >= 0");
    return {r1 / 2.0, r2 / 2.0, 2.0 * w1, 2.0 * w2, l1 / 2.0, l2 / 2.0, kind};
}

PairParams from_product_normal(const CorrelatedNormalParams& c) {
    c.validate();
    const double rx = c.r_x(), ry = c.r_y(), s = c.s();
    const double n = static_cast<double>(c.n);
    PairParams p{n / 2.0, n / 2.0,
                 s * (1.0 + c.rho), s * (1.0 - c.rho),
                 n * (rx + ry) * (rx + ry) / (4.0 * (1.0 + c.rho)),
                 n * (rx - ry) * (rx - ry) / (4.0 * (1.0 - c.rho)),
                 Kind::Difference};
    p.validate();
    return p;
}

}  // namespace ncgamma::exact
