#include "ncgamma/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "ncgamma/asymptotics.hpp"
#include "ncgamma/errors.hpp"
#include "ncgamma/exact.hpp"
#include "ncgamma/quad_core.hpp"
#include "ncgamma/specfun.hpp"

namespace ncgamma::quadrature {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_bessel_i(double nu, double x, const SeriesControl& ctrl) {
    SignedLogValue v = specfun::bessel_i(nu, x, ctrl);
    return v.is_zero() ? kNegInf : v.log_abs;
}

// power-map exponent so that t^{alpha-1}-type endpoint singularities are
// absorbed: t = v^m with m*alpha >= 1
int power_map_order(double alpha) {
    return alpha >= 1.0 ? 1 : static_cast<int>(std::ceil(1.0 / alpha));
}

struct BranchSetup {
    double log_prefactor;
    // log-integrand over the original t variable (t in (0,inf) for the
    // difference, (0,1) for the sum), minus endpoint behavior handled by the
    // power maps below
    std::function<double(double)> log_g;
    bool finite_range;   // sum: (0,1); difference: (0,inf)
    double left_alpha;   // effective t^{left_alpha-1} behavior at t=0
    double right_alpha;  // effective (1-t)^{right_alpha-1} behavior at t=1 (sum only)
};

BranchSetup setup_two_bessel(const PairParams& p, double x, const SeriesControl& ctrl) {
    const bool diff = p.kind == Kind::Difference;
    const double w = diff ? 1.0 / p.beta1 + 1.0 / p.beta2
                          : 1.0 / p.beta2 - 1.0 / p.beta1;  // sum integrand has e^{(1/b1-1/b2)xt}
    BranchSetup b;
    b.log_prefactor = 0.5 * (1.0 - p.alpha1) * (std::log(p.lambda1) - std::log(p.beta1)) +
                      0.5 * (1.0 - p.alpha2) * (std::log(p.lambda2) - std::log(p.beta2)) -
                      p.alpha1 * std::log(p.beta1) - p.alpha2 * std::log(p.beta2) +
                      0.5 * (p.alpha1 + p.alpha2) * std::log(x) - p.lambda1 - p.lambda2 -
                      x / p.beta1;
    b.finite_range = !diff;
    b.left_alpha = p.alpha2;
    b.right_alpha = p.alpha1;
    b.log_g = [&p, x, w, diff, ctrl](double t) {
        const double opp = diff ? 1.0 + t : 1.0 - t;
        if (t <= 0 || opp <= 0) return kNegInf;
        return 0.5 * (p.alpha2 - 1.0) * std::log(t) + 0.5 * (p.alpha1 - 1.0) * std::log(opp) -
               w * x * t +
               log_bessel_i(p.alpha1 - 1.0, 2.0 * std::sqrt(p.lambda1 * x * opp / p.beta1), ctrl) +
               log_bessel_i(p.alpha2 - 1.0, 2.0 * std::sqrt(p.lambda2 * x * t / p.beta2), ctrl);
    };
    return b;
}

BranchSetup setup_first_central(const PairParams& p, double x, const SeriesControl& ctrl) {
    const bool diff = p.kind == Kind::Difference;
    const double w = diff ? 1.0 / p.beta1 + 1.0 / p.beta2 : 1.0 / p.beta2 - 1.0 / p.beta1;
    BranchSetup b;
    b.log_prefactor = -std::lgamma(p.alpha1) +
                      0.5 * (1.0 - p.alpha2) * (std::log(p.lambda2) - std::log(p.beta2)) -
                      p.alpha1 * std::log(p.beta1) - p.alpha2 * std::log(p.beta2) +
                      0.5 * (2.0 * p.alpha1 + p.alpha2 - 1.0) * std::log(x) - p.lambda2 -
                      x / p.beta1;
    b.finite_range = !diff;
    b.left_alpha = p.alpha2;
    b.right_alpha = p.alpha1;
    b.log_g = [&p, x, w, diff, ctrl](double t) {
        const double opp = diff ? 1.0 + t : 1.0 - t;
        if (t <= 0 || opp <= 0) return kNegInf;
        return 0.5 * (p.alpha2 - 1.0) * std::log(t) + (p.alpha1 - 1.0) * std::log(opp) -
               w * x * t +
               log_bessel_i(p.alpha2 - 1.0, 2.0 * std::sqrt(p.lambda2 * x * t / p.beta2), ctrl);
    };
    return b;
}

BranchSetup setup_second_central(const PairParams& p, double x, const SeriesControl& ctrl) {
    const bool diff = p.kind == Kind::Difference;
    const double w = diff ? 1.0 / p.beta1 + 1.0 / p.beta2 : 1.0 / p.beta2 - 1.0 / p.beta1;
    BranchSetup b;
    b.log_prefactor = -std::lgamma(p.alpha2) +
                      0.5 * (1.0 - p.alpha1) * (std::log(p.lambda1) - std::log(p.beta1)) -
                      p.alpha1 * std::log(p.beta1) - p.alpha2 * std::log(p.beta2) +
                      0.5 * (p.alpha1 + 2.0 * p.alpha2 - 1.0) * std::log(x) - p.lambda1 -
                      x / p.beta1;
    b.finite_range = !diff;
    b.left_alpha = p.alpha2;
    b.right_alpha = p.alpha1;
    b.log_g = [&p, x, w, diff, ctrl](double t) {
        const double opp = diff ? 1.0 + t : 1.0 - t;
        if (t <= 0 || opp <= 0) return kNegInf;
        return (p.alpha2 - 1.0) * std::log(t) + 0.5 * (p.alpha1 - 1.0) * std::log(opp) -
               w * x * t +
               log_bessel_i(p.alpha1 - 1.0, 2.0 * std::sqrt(p.lambda1 * x * opp / p.beta1), ctrl);
    };
    return b;
}

BranchSetup setup_equal_scale(const PairParams& p, double x, const SeriesControl& ctrl) {
    const double beta = p.beta1, lambda = p.lambda1;
    const double asum = p.alpha1 + p.alpha2;
    const double ax = std::fabs(x);
    BranchSetup b;
    b.log_prefactor = -2.0 * lambda - asum * std::log(2.0) - std::log(beta) -
                      0.5 * std::log(3.14159265358979323846) +
                      0.5 * (1.0 - asum) * (std::log(lambda) - std::log(2.0)) +
                      asum * (std::log(ax) - std::log(beta));
    b.finite_range = false;
    b.left_alpha = 1.0;  // e^{-x^2/(4 b^2 t)} flattens the t -> 0 end
    b.right_alpha = 1.0;
    b.log_g = [beta, lambda, asum, ax, ctrl](double t) {
        if (t <= 0) return kNegInf;
        return -0.5 * (asum + 2.0) * std::log(t) - t - ax * ax / (4.0 * beta * beta * t) +
               log_bessel_i(asum - 1.0, (ax / beta) * std::sqrt(2.0 * lambda / t), ctrl);
    };
    return b;
}

double integrate_branch(const BranchSetup& b, const QuadratureControl& qc) {
    const int max_sub = std::max(qc.max_subdivisions, 50);
    SignedLogValue total = SignedLogValue::zero();
    if (b.finite_range) {
        // (0,1): split at 1/2 with one-sided power maps at both endpoints
        const int m0 = power_map_order(b.left_alpha);
        auto g_left = [&](double v) {
            if (v <= 0 || v >= 1) return kNegInf;
            const double t = 0.5 * std::pow(v, m0);
            return b.log_g(t) + std::log(0.5 * m0) + (m0 - 1.0) * std::log(v);
        };
        total += ncgamma::detail::integrate_log_scaled(g_left, 0.0, 1.0, qc.rel_tol, max_sub);
        const int m1 = power_map_order(b.right_alpha);
        auto g_right = [&](double v) {
            if (v <= 0 || v >= 1) return kNegInf;
            const double t = 1.0 - 0.5 * std::pow(v, m1);
            return b.log_g(t) + std::log(0.5 * m1) + (m1 - 1.0) * std::log(v);
        };
        total += ncgamma::detail::integrate_log_scaled(g_right, 0.0, 1.0, qc.rel_tol, max_sub);
    } else {
        // (0,inf) folded by t = u/(1-u), endpoint map at u=0
        const int m0 = power_map_order(b.left_alpha);
        auto g = [&](double v) {
            if (v <= 0 || v >= 1) return kNegInf;
            const double u = std::pow(v, m0);
            if (u >= 1) return kNegInf;
            const double t = u / (1.0 - u);
            return b.log_g(t) - 2.0 * std::log1p(-u) + std::log(static_cast<double>(m0)) +
                   (m0 - 1.0) * std::log(v);
        };
        total = ncgamma::detail::integrate_log_scaled(g, 0.0, 1.0, qc.rel_tol, max_sub, 65);
    }
    if (total.is_zero()) return 0.0;
    return std::exp(b.log_prefactor + total.log_abs);
}

}  // namespace

namespace detail {

double pdf_integral_branch(const PairParams& p, double x, IntegralBranch branch,
                           const QuadratureControl& qc) {
    p.validate();
    qc.validate();
    SeriesControl ctrl;
    switch (branch) {
        case IntegralBranch::TwoBessel:
            if (!(p.lambda1 > 0) || !(p.lambda2 > 0))
                throw DomainError("pdf_integral: two-Bessel branch requires both lambdas > 0");
            return integrate_branch(setup_two_bessel(p, x, ctrl), qc);
        case IntegralBranch::FirstCentral:
            if (p.lambda1 != 0 || !(p.lambda2 > 0))
                throw DomainError("pdf_integral: branch requires lambda1 = 0, lambda2 > 0");
            return integrate_branch(setup_first_central(p, x, ctrl), qc);
        case IntegralBranch::SecondCentral:
            if (p.lambda2 != 0 || !(p.lambda1 > 0))
                throw DomainError("pdf_integral: branch requires lambda2 = 0, lambda1 > 0");
            return integrate_branch(setup_second_central(p, x, ctrl), qc);
        case IntegralBranch::EqualScale:
            if (p.kind != Kind::Difference || p.beta1 != p.beta2 || p.lambda1 != p.lambda2 ||
                !(p.lambda1 > 0))
                throw DomainError(
                    "pdf_integral: equal-scale branch requires a difference with "
                    "lambda1 = lambda2 > 0 and beta1 = beta2");
            return integrate_branch(setup_equal_scale(p, x, ctrl), qc);
    }
    throw DomainError("pdf_integral: unknown branch");
}

}  // namespace detail

double pdf_integral(const PairParams& p, double x, const QuadratureControl& qc) {
    p.validate();
    qc.validate();
    if (p.kind == Kind::Difference) {
        if (x == 0) throw DomainError("pdf_integral: difference requires x != 0");
        if (x < 0) return pdf_integral(p.swapped(), -x, qc);
    } else if (!(x > 0)) {
        throw DomainError("pdf_integral: sum requires x > 0");
    }
    using detail::IntegralBranch;
    if (p.kind == Kind::Difference && p.beta1 == p.beta2 && p.lambda1 == p.lambda2 &&
        p.lambda1 > 0)
        return detail::pdf_integral_branch(p, x, IntegralBranch::EqualScale, qc);
    if (p.lambda1 > 0 && p.lambda2 > 0)
        return detail::pdf_integral_branch(p, x, IntegralBranch::TwoBessel, qc);
    if (p.lambda1 == 0 && p.lambda2 > 0)
        return detail::pdf_integral_branch(p, x, IntegralBranch::FirstCentral, qc);
    if (p.lambda2 == 0 && p.lambda1 > 0)
        return detail::pdf_integral_branch(p, x, IntegralBranch::SecondCentral, qc);
    // both central: the representation degenerates to the closed form
    return exact::pdf_exact(p, x);
}

// ---------------------------------------------------------------------------
// CDF / quantile
// ---------------------------------------------------------------------------

namespace {

// exact upper tail of a non-central gamma via the Poisson mixture of
// regularized incomplete gamma tails (used for the sum with equal scales,
// which has no asymptotic expansion here)
double ncg_upper_tail(double alpha, double beta, double lambda, double x) {
    if (x <= 0) return 1.0;
    double logw = -lambda;  // log Poisson weight
    double cum = 0.0, tail = 0.0;
    for (int k = 0; k < 100000; ++k) {
        const double wgt = std::exp(logw);
        tail += wgt * specfun::detail::reg_gamma_q(alpha + k, x / beta);
        cum += wgt;
        if (1.0 - cum < 1e-18 * std::max(tail, 1e-300)) break;
        if (1.0 - cum < 1e-18) break;
        logw += std::log(lambda) - std::log(k + 1.0);
    }
    return tail;
}

double mean_of(const PairParams& p) {
    const double m1 = p.beta1 * (p.alpha1 + p.lambda1);
    const double m2 = p.beta2 * (p.alpha2 + p.lambda2);
    return p.kind == Kind::Difference ? m1 - m2 : m1 + m2;
}

double sd_of(const PairParams& p) {
    const double v1 = p.beta1 * p.beta1 * (p.alpha1 + 2.0 * p.lambda1);
    const double v2 = p.beta2 * p.beta2 * (p.alpha2 + 2.0 * p.lambda2);
    return std::sqrt(v1 + v2);
}

// orient a sum so that beta1 > beta2, as the tail expansions require
PairParams tail_oriented(const PairParams& p) {
    if (p.kind == Kind::Sum && p.beta1 < p.beta2) return p.swapped();
    return p;
}

// Self-validating crossover: smallest scanned x where consecutive expansion
// orders agree to 1e-9 relative, or where the tail is below 1e-13 and thus
// negligible against the 1e-8 CDF targets.
double find_crossover(const PairParams& oriented, double start, int order) {
    double x = std::max(start, 1e-2);
    for (int it = 0; it < 400; ++it) {
        const double hi = asympt::tail_asymptotic(oriented, asympt::Side::PlusInfinity, x, order);
        const double lo =
            asympt::tail_asymptotic(oriented, asympt::Side::PlusInfinity, x, order - 2);
        if (hi > 0 && hi < 0.5) {
            if (std::fabs(hi - lo) <= 1e-9 * hi) return x;
            if (hi < 1e-13) return x;
        }
        x *= 1.2;
    }
    return x;
}

}  // namespace

CdfEvaluator::CdfEvaluator(const PairParams& p, const QuadratureControl& qc,
                           const SeriesControl& ctrl)
    : p_(p), qc_(qc), ctrl_(ctrl) {
    p_.validate();
    qc_.validate();
    ctrl_.validate();
    mixture_tail_ = (p.kind == Kind::Sum && p.beta1 == p.beta2);
}

double CdfEvaluator::density(double x) const { return exact::pdf_exact(p_, x, ctrl_); }

double CdfEvaluator::upper_tail(double x) const {
    if (mixture_tail_)
        return ncg_upper_tail(p_.alpha1 + p_.alpha2, p_.beta1, p_.lambda1 + p_.lambda2, x);
    return asympt::tail_asymptotic(tail_oriented(p_), asympt::Side::PlusInfinity, x, order_plus_);
}

double CdfEvaluator::lower_tail(double x) const {
    return asympt::tail_asymptotic(p_, asympt::Side::MinusInfinity, x, order_minus_);
}

void CdfEvaluator::ensure_crossovers() {
    if (xc_plus_) return;
    const double m = mean_of(p_), s = sd_of(p_);
    if (mixture_tail_) {
        xc_plus_ = m + 8.0 * s;  // mixture tail is exact; any anchor works
    } else {
        xc_plus_ = find_crossover(tail_oriented(p_), std::max(m + 6.0 * s, 4.0 * s), order_plus_);
    }
    if (p_.kind == Kind::Difference) {
        xc_minus_ =
            -find_crossover(p_.swapped(), std::max(-m + 6.0 * s, 4.0 * s), order_minus_);
        f_low_ = lower_tail(*xc_minus_);
        known_[*xc_minus_] = f_low_;
    } else {
        xc_minus_ = 0.0;
        f_low_ = 0.0;
        known_[0.0] = 0.0;
    }
}

double CdfEvaluator::piece_integral(double a, double b) const {
    if (!(b > a)) return 0.0;
    const double asum = p_.alpha1 + p_.alpha2;
    auto f = [this](double x) { return density(x); };
    const int max_sub = std::max(qc_.max_subdivisions, 50);

    // pieces touching the origin get the power-weighted substitution that
    // turns the integrable |x|^{asum-1} endpoint into a smooth one
    if (a == 0.0 || b == 0.0) {
        const double c = (a == 0.0) ? b : -a;  // one-sided width
        const int sgn = (a == 0.0) ? 1 : -1;
        int q = 1;
        if (asum < 1.0) q = static_cast<int>(std::ceil(1.0 / asum));
        else if (asum == 1.0) q = 2;  // softens the log endpoint
        if (q == 1)
            return ncgamma::detail::gk_adaptive(f, a, b, qc_.abs_tol, qc_.rel_tol, max_sub);
        auto g = [&](double v) {
            if (v <= 0) return 0.0;
            const double x = sgn * c * std::pow(v, q);
            return density(x) * c * q * std::pow(v, q - 1.0);
        };
        return ncgamma::detail::gk_adaptive(g, 0.0, 1.0, qc_.abs_tol, qc_.rel_tol, max_sub);
    }
    return ncgamma::detail::gk_adaptive(f, a, b, qc_.abs_tol, qc_.rel_tol, max_sub);
}

double CdfEvaluator::body_integral(double a, double b) const {
    if (!(b > a)) return b == a ? 0.0 : -body_integral(b, a);
    if (a < 0.0 && b > 0.0) return piece_integral(a, 0.0) + piece_integral(0.0, b);
    return piece_integral(a, b);
}

double CdfEvaluator::cdf_unclamped(double x) {
    ensure_crossovers();
    if (p_.kind == Kind::Sum && x <= 0) return 0.0;
    if (x >= *xc_plus_) return 1.0 - upper_tail(x);
    if (p_.kind == Kind::Difference && x <= *xc_minus_) return lower_tail(x);

    auto it = known_.find(x);
    if (it != known_.end()) return it->second;
    // integrate from the nearest cached anchor
    it = known_.lower_bound(x);
    double x0, f0;
    if (it == known_.end()) {
        x0 = known_.rbegin()->first;
        f0 = known_.rbegin()->second;
    } else if (it == known_.begin()) {
        x0 = it->first;
        f0 = it->second;
    } else {
        auto above = it;
        auto below = std::prev(it);
        if (std::fabs(above->first - x) < std::fabs(x - below->first)) {
            x0 = above->first;
            f0 = above->second;
        } else {
            x0 = below->first;
            f0 = below->second;
        }
    }
    const double f = f0 + body_integral(x0, x);
    known_[x] = f;
    return f;
}

double CdfEvaluator::cdf(double x) {
    return std::min(1.0, std::max(0.0, cdf_unclamped(x)));
}

double CdfEvaluator::upper_crossover() {
    ensure_crossovers();
    return *xc_plus_;
}

double CdfEvaluator::lower_crossover() {
    ensure_crossovers();
    return *xc_minus_;
}

double CdfEvaluator::quantile(double prob) {
    if (!(prob > 0 && prob < 1))
        throw DomainError("quantile_numeric: prob must lie in (0,1)");
    ensure_crossovers();
    const double s = std::max(sd_of(p_), 1e-3);
    double lo, hi;
    if (p_.kind == Kind::Sum) {
        lo = 0.0;
        hi = std::max(mean_of(p_), s);
    } else {
        lo = mean_of(p_) - s;
        hi = mean_of(p_) + s;
    }
    double flo = cdf_unclamped(lo) - prob;
    double fhi = cdf_unclamped(hi) - prob;
    for (int it = 0; flo > 0 && it < 200; ++it) {
        if (p_.kind == Kind::Sum && lo <= 0) { flo = -prob; break; }
        lo -= (hi - lo);
        flo = cdf_unclamped(lo) - prob;
    }
    for (int it = 0; fhi < 0 && it < 200; ++it) {
        hi += (hi - lo);
        fhi = cdf_unclamped(hi) - prob;
    }
    if (flo > 0 || fhi < 0)
        throw NonConvergence("quantile_numeric: bracketing failure");

    // safeguarded secant/bisection to |F - prob| < 1e-8
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 240; ++it) {
        const double fx = cdf_unclamped(x) - prob;
        if (std::fabs(fx) < 1e-8) return x;
        if (fx > 0) { hi = x; fhi = fx; }
        else { lo = x; flo = fx; }
        double next = x;
        const double fpx = density(x);
        if (fpx > 0) next = x - fx / fpx;  // Newton step
        if (!(next > lo && next < hi)) {
            // secant fallback, then bisection
            if (fhi != flo) next = lo + (hi - lo) * (-flo) / (fhi - flo);
            if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        }
        x = next;
    }
    throw NonConvergence("quantile_numeric: root refinement stalled");
}

double cdf_numeric(const PairParams& p, double x, const QuadratureControl& qc) {
    CdfEvaluator ev(p, qc);
    return ev.cdf(x);
}

double quantile_numeric(const PairParams& p, double prob, const QuadratureControl& qc) {
    CdfEvaluator ev(p, qc);
    return ev.quantile(prob);
}

}  // namespace ncgamma::quadrature
