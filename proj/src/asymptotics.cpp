#include "ncgamma/asymptotics.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

#include "ncgamma/errors.hpp"
#include "ncgamma/specfun.hpp"

namespace ncgamma::asympt {

namespace {

constexpr double kPi = 3.14159265358979323846;

// The -/+ and +/- convention of the unified expansions, threaded through a
// single sign so no formula is transcribed twice: difference -> s = +1,
// sum -> s = -1.
struct SignPack {
    double s;
    double inv_b2_pm_b1;  // 1/beta2 +/- 1/beta1
    double b2_pm_b1;      // beta2 +/- beta1
    double b1_pm_b2;      // beta1 +/- beta2
    double inv_b1_pm_b2;  // 1/beta1 +/- 1/beta2
};

SignPack signs(const PairParams& p) {
    const double s = (p.kind == Kind::Difference) ? 1.0 : -1.0;
    return {s,
            1.0 / p.beta2 + s / p.beta1,
            p.beta2 + s * p.beta1,
            p.beta1 + s * p.beta2,
            1.0 / p.beta1 + s / p.beta2};
}

void check_expansion_domain(const PairParams& p, bool need_nc) {
    p.validate();
    if (p.kind == Kind::Sum && !(p.beta1 > p.beta2))
        throw DomainError("asymptotics: sum expansions require beta1 > beta2");
    if (need_nc && !(p.lambda1 > 0))
        throw DomainError("asymptotics: noncentral family requires lambda1 > 0");
    if (!need_nc && p.lambda1 != 0)
        throw DomainError("asymptotics: central family requires lambda1 = 0");
}

// generalized binomial coefficient binom(u, k) = (-1)^k (-u)_k / k!
SignedLogValue gen_binom(double u, int k) {
    SignedLogValue v = specfun::pochhammer(-u, k);
    if (v.is_zero()) return v;
    v *= SignedLogValue::from_log(-std::lgamma(k + 1.0), +1);
    if (k % 2 != 0) v.sign = -v.sign;
    return v;
}

double coeff_c_impl(int l, const PairParams& p) {
    if (l == 0) return 1.0;
    const SignPack sp = signs(p);
    const double laguerre_arg = -p.lambda2 * p.beta1 / sp.b1_pm_b2;
    const double br = p.beta1 / p.lambda1;
    double sum = 0.0;
    for (int j = 0; j <= l; ++j) {
        // (3/2+j-a1)_{l-j} (a1-j-1/2)_{l-j} / ((l-j)! 4^{l-j}), as a running
        // product to keep intermediates balanced
        double f = 1.0;
        for (int i = 0; i < l - j; ++i)
            f *= (1.5 + j - p.alpha1 + i) * (p.alpha1 - j - 0.5 + i) / (4.0 * (i + 1.0));
        sum += f * std::pow(br, 0.5 * l - j) * std::pow(sp.inv_b1_pm_b2, -j) *
               specfun::laguerre(j, p.alpha2 - 1.0, laguerre_arg);
    }
    return sum;
}

double coeff_d_impl(int k, const PairParams& p) {
    if (k == 0) return 1.0;
    const SignPack sp = signs(p);
    const double poch = specfun::pochhammer(1.0 - p.alpha1, k).to_real();
    if (poch == 0.0) return 0.0;
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    return sign * poch * std::pow(sp.inv_b1_pm_b2, -k) *
           specfun::laguerre(k, p.alpha2 - 1.0, -p.lambda2 * p.beta1 / sp.b1_pm_b2);
}

double coeff_gamma_impl(int pord, const PairParams& p) {
    if (pord == 0) return 1.0;
    const double lb = p.lambda1 * p.beta1;
    SignedLogValue sum = SignedLogValue::zero();
    for (int j = 0; 2 * j <= pord; ++j) {
        for (int l = 0; l + 2 * j <= pord; ++l) {
            const double cl = coeff_c(l, p);
            if (cl == 0.0) continue;
            for (int k = 0; l + 2 * j + k <= pord; ++k) {
                const int i = pord - l - 2 * j - k;
                SignedLogValue t = SignedLogValue::from_real(cl);
                t *= gen_binom(p.alpha1 - 0.5 - l, k);
                if (t.is_zero()) continue;
                t *= gen_binom(p.alpha1 - 1.5 - l - k - 2.0 * j, i);
                if (t.is_zero()) continue;
                t *= specfun::pochhammer(0.5 * (l + k) - 0.25 * (2.0 * p.alpha1 - 3.0), j);
                if (t.is_zero()) continue;
                t *= SignedLogValue::from_log(j * std::log(p.beta1) +
                                              0.5 * (k + i) * std::log(lb), +1);
                if ((i + j) % 2 != 0) t.sign = -t.sign;
                sum += t;
            }
        }
    }
    return sum.to_real();
}

double coeff_delta_impl(int k, const PairParams& p) {
    if (k == 0) return 1.0;
    double sum = 0.0;
    for (int s = 0; s <= k; ++s)
        sum += std::pow(-p.beta1, k - s) *
               specfun::pochhammer(k + 1.0 - p.alpha1, k - s).to_real() * coeff_d(s, p);
    return sum;
}

// memoized coefficient lists; presence of the cache must not change results
class CoeffCache {
public:
    double get(int family, int idx, const PairParams& p, double (*f)(int, const PairParams&)) {
        const Key key{p.alpha1, p.alpha2, p.beta1, p.beta2, p.lambda1, p.lambda2,
                      static_cast<int>(p.kind), family};
        std::lock_guard<std::mutex> lock(mu_);
        auto& vec = cache_[key];
        while (static_cast<int>(vec.size()) <= idx)
            vec.push_back(f(static_cast<int>(vec.size()), p));
        return vec[static_cast<size_t>(idx)];
    }

private:
    using Key = std::tuple<double, double, double, double, double, double, int, int>;
    std::mutex mu_;
    std::map<Key, std::vector<double>> cache_;
};

CoeffCache& cache() {
    static CoeffCache c;
    return c;
}

// Shared prefactor logic.  tail variants carry an extra factor beta1
// relative to the pdf variants (the 1/a from integrating e^{-x/beta1}).
double leading_log_noncentral(const PairParams& p, double x, bool tail) {
    const SignPack sp = signs(p);
    double lp = -std::log(2.0 * std::sqrt(kPi)) - p.alpha2 * std::log(sp.inv_b2_pm_b1) -
                p.alpha1 * std::log(p.beta1) - p.alpha2 * std::log(p.beta2) +
                0.25 * (1.0 - 2.0 * p.alpha1) * (std::log(p.lambda1) - std::log(p.beta1)) -
                p.lambda1 - p.lambda2 * p.beta2 / sp.b2_pm_b1 +
                0.25 * (2.0 * p.alpha1 - 3.0) * std::log(x) +
                2.0 * std::sqrt(p.lambda1 * x / p.beta1) - x / p.beta1;
    if (tail) lp += std::log(p.beta1);
    return lp;
}

double leading_log_central(const PairParams& p, double x, bool tail) {
    const SignPack sp = signs(p);
    double lp = -p.alpha1 * std::log(p.beta1) - p.alpha2 * std::log(p.beta2) -
                std::lgamma(p.alpha1) - p.alpha2 * std::log(sp.inv_b2_pm_b1) +
                (p.alpha1 - 1.0) * std::log(x) - x / p.beta1 -
                p.lambda2 * p.beta2 / sp.b2_pm_b1;
    if (tail) lp += std::log(p.beta1);
    return lp;
}

AsymptoticApprox build(const PairParams& p, double x, int order, bool tail) {
    check_expansion_domain(p, p.lambda1 > 0);
    if (order < 0 || order > kMaxOrder)
        throw DomainError("asymptotics: order must lie in [0, 12]");
    if (!(x > 0)) throw DomainError("asymptotics: expansions require |x| > 0");

    AsymptoticApprox a;
    a.order = order;
    const bool nc = p.lambda1 > 0;
    if (nc) {
        a.family = tail ? AsymptoticApprox::Family::TailNoncentral
                        : AsymptoticApprox::Family::PdfNoncentral;
        a.leading_log = leading_log_noncentral(p, x, tail);
        for (int l = 0; l <= order; ++l)
            a.coefficients.push_back(
                cache().get(tail ? 2 : 0, l, p, tail ? &coeff_gamma_impl : &coeff_c_impl));
    } else {
        a.family = tail ? AsymptoticApprox::Family::TailCentral
                        : AsymptoticApprox::Family::PdfCentral;
        a.leading_log = leading_log_central(p, x, tail);
        for (int k = 0; k <= order; ++k)
            a.coefficients.push_back(
                cache().get(tail ? 3 : 1, k, p, tail ? &coeff_delta_impl : &coeff_d_impl));
    }
    return a;
}

}  // namespace

double AsymptoticApprox::evaluate(double abs_x) const {
    const bool half_powers = (family == Family::PdfNoncentral || family == Family::TailNoncentral);
    double sum = 0.0;
    for (size_t l = 0; l < coefficients.size(); ++l) {
        const double expo = half_powers ? 0.5 * static_cast<double>(l) : static_cast<double>(l);
        sum += coefficients[l] * std::pow(abs_x, -expo);
    }
    return std::exp(leading_log) * sum;
}

double coeff_c(int l, const PairParams& p) {
    check_expansion_domain(p, true);
    if (l < 0) throw DomainError("coeff_c: l must be non-negative");
    return coeff_c_impl(l, p);
}

double coeff_d(int k, const PairParams& p) {
    check_expansion_domain(p, false);
    if (k < 0) throw DomainError("coeff_d: k must be non-negative");
    return coeff_d_impl(k, p);
}

double coeff_gamma(int pord, const PairParams& p) {
    check_expansion_domain(p, true);
    if (pord < 0) throw DomainError("coeff_gamma: p must be non-negative");
    return coeff_gamma_impl(pord, p);
}

double coeff_delta(int k, const PairParams& p) {
    check_expansion_domain(p, false);
    if (k < 0) throw DomainError("coeff_delta: k must be non-negative");
    return coeff_delta_impl(k, p);
}

AsymptoticApprox pdf_expansion(const PairParams& p, Side side, double x, int order) {
    if (side == Side::MinusInfinity) {
        if (p.kind != Kind::Difference)
            throw DomainError("asymptotics: MinusInfinity side requires the difference");
        if (!(x < 0)) throw DomainError("asymptotics: MinusInfinity side requires x < 0");
        return pdf_expansion(p.swapped(), Side::PlusInfinity, -x, order);
    }
    return build(p, x, order, false);
}

double pdf_asymptotic(const PairParams& p, Side side, double x, int order) {
    return pdf_expansion(p, side, x, order).evaluate(std::fabs(x));
}

AsymptoticApprox tail_expansion(const PairParams& p, Side side, double x, int order) {
    if (side == Side::MinusInfinity) {
        // F_{X1-X2}(x) = P(X2-X1 > -x): upper tail of the swapped pair
        if (p.kind != Kind::Difference)
            throw DomainError("asymptotics: MinusInfinity side requires the difference");
        if (!(x < 0)) throw DomainError("asymptotics: MinusInfinity side requires x < 0");
        return tail_expansion(p.swapped(), Side::PlusInfinity, -x, order);
    }
    return build(p, x, order, true);
}

double tail_asymptotic(const PairParams& p, Side side, double x, int order) {
    return tail_expansion(p, side, x, order).evaluate(std::fabs(x));
}

double quantile_asymptotic(const PairParams& p, double prob, Tail tail) {
    p.validate();
    if (!(prob > 0 && prob < 1))
        throw DomainError("quantile_asymptotic: prob must lie in (0,1)");
    if (tail == Tail::Lower) {
        if (p.kind != Kind::Difference)
            throw DomainError("quantile_asymptotic: lower tail requires the difference");
        return -quantile_asymptotic(p.swapped(), 1.0 - prob, Tail::Upper);
    }
    check_expansion_domain(p, p.lambda1 > 0);
    const SignPack sp = signs(p);
    const double q = 1.0 - prob;
    const double L = std::log(1.0 / q);
    const double lnL = std::log(L);

    if (p.lambda1 > 0) {
        const double m = 0.25 * (2.0 * p.alpha1 - 3.0);
        const double lnA = -std::log(2.0 * std::sqrt(kPi)) -
                           p.alpha2 * std::log(sp.inv_b2_pm_b1) - p.alpha2 * std::log(p.beta2) +
                           0.25 * (1.0 - 2.0 * p.alpha1) * std::log(p.lambda1);
        return p.beta1 * (L + 2.0 * std::sqrt(p.lambda1) * std::sqrt(L) + m * lnL + lnA +
                          p.lambda1 - p.lambda2 * p.beta2 / sp.b2_pm_b1 +
                          m * std::sqrt(p.lambda1) * lnL / std::sqrt(L));
    }
    const double lnA = -p.alpha2 * std::log1p(sp.s * p.beta2 / p.beta1) - std::lgamma(p.alpha1);
    return p.beta1 * (L + (p.alpha1 - 1.0) * lnL + lnA - p.lambda2 * p.beta2 / sp.b2_pm_b1);
}

// ---------------------------------------------------------------------------
// product of correlated normals
// ---------------------------------------------------------------------------

double coeff_c_product_normal(int l, const CorrelatedNormalParams& c) {
    c.validate();
    if (l < 0) throw DomainError("coeff_c_product_normal: l must be non-negative");
    const double rx = c.r_x(), ry = c.r_y();
    if (rx + ry == 0.0)
        throw DomainError("coeff_c_product_normal: requires r_x + r_y != 0");
    if (l == 0) return 1.0;
    const double n = static_cast<double>(c.n);
    const double zj = 0.5 * n * ((1.0 - c.rho) / (1.0 + c.rho)) * (rx + ry) * (rx + ry);
    const double lag_arg = -0.125 * n * ((1.0 + c.rho) / (1.0 - c.rho)) * (rx - ry) * (rx - ry);
    double sum = 0.0;
    for (int j = 0; j <= l; ++j) {
        double f = 1.0;
        for (int i = 0; i < l - j; ++i)
            f *= (1.5 - 0.5 * n + j + i) * (0.5 * n - 0.5 - j + i) / (i + 1.0);
        sum += f * std::pow(zj, j) * specfun::laguerre(j, 0.5 * n - 1.0, lag_arg);
    }
    return sum * std::pow((1.0 + c.rho) / std::fabs(rx + ry), l) /
           (std::pow(2.0, l) * std::pow(n, 0.5 * l));
}

double coeff_d_product_normal(int k, const CorrelatedNormalParams& c) {
    c.validate();
    if (k < 0) throw DomainError("coeff_d_product_normal: k must be non-negative");
    if (k == 0) return 1.0;
    const double n = static_cast<double>(c.n);
    const double rx = c.r_x();
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    return sign * specfun::pochhammer(1.0 - 0.5 * n, k).to_real() *
           std::pow(0.5 * (1.0 - c.rho * c.rho), k) *
           specfun::laguerre(k, 0.5 * n - 1.0,
                             -0.5 * n * ((1.0 + c.rho) / (1.0 - c.rho)) * rx * rx);
}

double coeff_c_product_normal_hermite(int l, const CorrelatedNormalParams& c) {
    c.validate();
    if (c.n != 1) throw DomainError("Hermite-form coefficients require n = 1");
    const double rx = c.r_x(), ry = c.r_y();
    if (rx + ry == 0.0)
        throw DomainError("coeff_c_product_normal_hermite: requires r_x + r_y != 0");
    if (l == 0) return 1.0;
    const double zj = 0.125 * ((1.0 - c.rho) / (1.0 + c.rho)) * (rx + ry) * (rx + ry);
    const double y = std::sqrt((1.0 + c.rho) / (8.0 * (1.0 - c.rho))) * (rx - ry);
    double sum = 0.0;
    for (int j = (l + 1) / 2; j <= l; ++j) {
        double binom = 1.0;
        for (int i = 0; i < j; ++i) binom *= (l - i) / (i + 1.0);
        double fact = 1.0;
        for (int i = 2; i <= 2 * j - l; ++i) fact *= i;
        sum += binom / fact * std::pow(zj, j) * specfun::hermite_even_imag(j, y);
    }
    const double sign = (l % 2 == 0) ? 1.0 : -1.0;
    return sign * std::pow(0.5 * (1.0 + c.rho) / std::fabs(rx + ry), l) * sum;
}

double coeff_d_product_normal_hermite(int k, const CorrelatedNormalParams& c) {
    c.validate();
    if (c.n != 1) throw DomainError("Hermite-form coefficients require n = 1");
    if (k == 0) return 1.0;
    double central_binom = 1.0;  // binom(2k, k)
    for (int i = 1; i <= k; ++i) central_binom *= (k + i) / static_cast<double>(i);
    const double y = std::sqrt((1.0 + c.rho) / (2.0 * (1.0 - c.rho))) * c.r_x();
    return central_binom * std::pow((1.0 - c.rho * c.rho) / 32.0, k) *
           specfun::hermite_even_imag(k, y);
}

double pdf_asymptotic_product_normal(const CorrelatedNormalParams& c, Side side, double x,
                                     int order) {
    c.validate();
    if (order < 0 || order > kMaxOrder)
        throw DomainError("asymptotics: order must lie in [0, 12]");
    const double rx = c.r_x(), ry = c.r_y();
    if (side == Side::MinusInfinity) {
        if (!(x < 0)) throw DomainError("asymptotics: MinusInfinity side requires x < 0");
        // substitution rules for the left tail: (r_y, rho, x) -> (-r_y, -rho, -x),
        // dropping to (rho, x) -> (-rho, -x) when r_x = r_y
        CorrelatedNormalParams cm = c;
        cm.mu_y = -c.mu_y;
        cm.rho = -c.rho;
        return pdf_asymptotic_product_normal(cm, Side::PlusInfinity, -x, order);
    }
    if (!(x > 0)) throw DomainError("asymptotics: PlusInfinity side requires x > 0");

    const double n = static_cast<double>(c.n);
    const double s = c.s();
    if (rx + ry != 0.0) {
        const double lc = -0.25 * (n + 1.0) * std::log(s) - std::log(2.0) -
                          0.5 * std::log(2.0 * kPi) +
                          0.5 * (n - 1.0) * std::log((1.0 + c.rho) / (std::fabs(rx + ry) * std::sqrt(n))) -
                          0.25 * n * (rx + ry) * (rx + ry) / (1.0 + c.rho) -
                          0.125 * n * (rx - ry) * (rx - ry);
        const double lead = lc + 0.25 * (n - 3.0) * std::log(x) +
                            std::fabs(rx + ry) / (1.0 + c.rho) * std::sqrt(n * x / s) -
                            x / (s * (1.0 + c.rho));
        double sum = 0.0;
        for (int l = 0; l <= order; ++l)
            sum += coeff_c_product_normal(l, c) * std::pow(s / x, 0.5 * l);
        return std::exp(lead) * sum;
    }
    const double lead = -0.5 * n * rx * rx - 0.5 * n * std::log(2.0 * s) -
                        std::lgamma(0.5 * n) + (0.5 * n - 1.0) * std::log(x) -
                        x / (s * (1.0 + c.rho));
    double sum = 0.0;
    for (int k = 0; k <= order; ++k)
        sum += coeff_d_product_normal(k, c) * std::pow(s / x, k);
    return std::exp(lead) * sum;
}

}  // namespace ncgamma::asympt
