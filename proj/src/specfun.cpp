#include "ncgamma/specfun.hpp"

#include <cmath>
#include <limits>

#include "ncgamma/errors.hpp"
#include "ncgamma/quad_core.hpp"

namespace ncgamma::specfun {

namespace {

constexpr double kPi = 3.14159265358979323846;

}  // namespace

namespace detail {

bool is_integer(double x, double tol) {
    return std::fabs(x - std::round(x)) <= tol;
}

}  // namespace detail

SignedLogValue log_gamma(double x) {
    if (x > 0) return {std::lgamma(x), +1};
    if (detail::is_integer(x, 0.0))
        throw PoleError("log_gamma: pole at non-positive integer");
    // reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)  [DLMF 5.5.3]
    const double s = std::sin(kPi * x);
    const double la = std::log(kPi) - std::log(std::fabs(s)) - std::lgamma(1.0 - x);
    return {la, s > 0 ? +1 : -1};
}

SignedLogValue reciprocal_gamma(double x) {
    if (x <= 0 && detail::is_integer(x, 0.0)) return SignedLogValue::zero();
    SignedLogValue g = log_gamma(x);
    return {-g.log_abs, g.sign};
}

SignedLogValue pochhammer(double a, int n) {
    if (n < 0) throw DomainError("pochhammer: n must be non-negative");
    SignedLogValue r = SignedLogValue::one();
    for (int i = 0; i < n; ++i) {
        const double f = a + i;
        if (f == 0.0) return SignedLogValue::zero();
        r *= SignedLogValue::from_real(f);
    }
    return r;
}

SignedLogValue kummer_m(double a, double b, double x, const SeriesControl& ctrl) {
    ctrl.validate();
    if (b <= 0 && detail::is_integer(b, 0.0))
        throw PoleError("kummer_m: b is a non-positive integer");
    if (x < 0) {
        // Kummer's transformation M(a,b,x) = e^x M(b-a,b,-x)  [DLMF 13.2.39]
        SignedLogValue m = kummer_m(b - a, b, -x, ctrl);
        if (m.is_zero()) return m;
        return {m.log_abs + x, m.sign};
    }
    if (x == 0.0) return SignedLogValue::one();
    if (a == b) return SignedLogValue::from_log(x, +1);  // M(a,a,x) = e^x

    const bool terminating = (a <= 0 && detail::is_integer(a, 0.0));
    const int n_stop = terminating ? static_cast<int>(-std::round(a)) : -1;

    SeriesAccumulator acc(ctrl);
    SignedLogValue term = SignedLogValue::one();
    int k = 0;
    while (true) {
        const bool done = acc.add(term);
        if (terminating && k == n_stop) break;
        if (!terminating && done) break;
        if (acc.exhausted()) {
            if (terminating) break;
            throw NonConvergence("kummer_m: series did not converge");
        }
        term *= SignedLogValue::from_real((a + k) / (b + k));
        term *= SignedLogValue::from_real(x / (k + 1));
        ++k;
    }
    return acc.sum();
}

namespace {

// Laguerre three-term recurrence with a running rescale so that huge n or
// huge |x| cannot overflow the intermediates.
SignedLogValue laguerre_log_impl(int n, double alpha, double x) {
    if (n == 0) return SignedLogValue::one();
    double lprev = 1.0;           // L_0
    double lcur = alpha + 1 - x;  // L_1
    double offset = 0.0;          // log of the scale factored out so far
    for (int k = 1; k < n; ++k) {
        double lnext = ((2.0 * k + 1.0 + alpha - x) * lcur - (k + alpha) * lprev) / (k + 1.0);
        lprev = lcur;
        lcur = lnext;
        const double m = std::max(std::fabs(lprev), std::fabs(lcur));
        if (m > 1e280) {
            lprev /= 1e280;
            lcur /= 1e280;
            offset += std::log(1e280);
        }
    }
    if (lcur == 0.0) return SignedLogValue::zero();
    return {offset + std::log(std::fabs(lcur)), lcur > 0 ? +1 : -1};
}

// exp-substituted exponential-integral representation of U(a,b,x):
//   U(a,b,x) = 1/Gamma(a) * Int_0^inf e^{-x t} t^{a-1} (1+t)^{b-a-1} dt
// with t = e^tau - 1, giving the log-integrand
//   l(tau) = -x(e^tau - 1) + (a-1) ln(e^tau - 1) + (b-a) tau.
// Peak at x E^2 - (x+b-1) E + (b-a) = 0, E = e^tau.  The substitution keeps
// the boundary layer near t=0 resolvable for large b and small x.
SignedLogValue tricomi_u_quadrature(double a, double b, double x, const SeriesControl& ctrl) {
    auto log_integrand = [&](double tau) -> double {
        if (tau <= 0) return -std::numeric_limits<double>::infinity();
        const double em1 = std::expm1(tau);
        return -x * em1 + (a - 1.0) * std::log(em1) + (b - a) * tau;
    };

    // split point: interior maximum when the quadratic has a root E > 1
    double tau_star = 0.0;
    {
        const double B = x + b - 1.0;
        const double disc = B * B - 4.0 * x * (b - a);
        if (disc >= 0) {
            const double E = (B + std::sqrt(disc)) / (2.0 * x);
            if (E > 1.0) tau_star = std::log(E);
        }
    }
    if (tau_star <= 0) tau_star = std::max(1.0 / (x + 1.0), 1e-3);

    const double rel = std::max(ctrl.rel_tol, 1e-14);
    const int max_subdiv = 400;

    // left piece: tau = tau_star * v^m, m chosen so the t^{a-1} endpoint
    // singularity is absorbed into the Jacobian
    const int m = (a >= 1.0) ? 1 : static_cast<int>(std::ceil(1.0 / a));
    auto g_left = [&](double v) -> double {
        if (v <= 0 || v >= 1) return -std::numeric_limits<double>::infinity();
        const double tau = tau_star * std::pow(v, m);
        return log_integrand(tau) + std::log(tau_star * m) + (m - 1) * std::log(v);
    };
    SignedLogValue left = ncgamma::detail::integrate_log_scaled(g_left, 0.0, 1.0, rel, max_subdiv);

    // right piece: tau = tau_star + W*y/(1-y)
    const double W = std::max(tau_star, 1.0 / std::sqrt(x * std::exp(tau_star) + b + 1.0));
    auto g_right = [&](double y) -> double {
        if (y <= 0 || y >= 1) return -std::numeric_limits<double>::infinity();
        const double om = 1.0 - y;
        const double tau = tau_star + W * y / om;
        return log_integrand(tau) + std::log(W) - 2.0 * std::log(om);
    };
    SignedLogValue right = ncgamma::detail::integrate_log_scaled(g_right, 0.0, 1.0, rel, max_subdiv);

    SignedLogValue integral = left + right;
    if (integral.is_zero()) return integral;
    return integral * reciprocal_gamma(a);
}

// DLMF 13.2.42 connection formula, valid for non-integer b:
//   U(a,b,x) = Gamma(1-b)/Gamma(a-b+1) M(a,b,x)
//            + Gamma(b-1)/Gamma(a) x^{1-b} M(a-b+1,2-b,x)
SignedLogValue tricomi_u_two_m(double a, double b, double x, const SeriesControl& ctrl,
                               double* cancellation = nullptr) {
    SignedLogValue t1 = log_gamma(1.0 - b) * reciprocal_gamma(a - b + 1.0) * kummer_m(a, b, x, ctrl);
    SignedLogValue t2 = log_gamma(b - 1.0) * reciprocal_gamma(a) *
                        SignedLogValue::from_log((1.0 - b) * std::log(x), +1) *
                        kummer_m(a - b + 1.0, 2.0 - b, x, ctrl);
    SignedLogValue r = t1 + t2;
    if (cancellation) {
        const double big = std::max(t1.is_zero() ? -1e308 : t1.log_abs,
                                    t2.is_zero() ? -1e308 : t2.log_abs);
        *cancellation = r.is_zero() ? std::numeric_limits<double>::infinity() : big - r.log_abs;
    }
    return r;
}

SignedLogValue tricomi_u_dispatch(double a, double b, double x, const SeriesControl& ctrl,
                                  bool allow_laguerre) {
    if (!(x > 0)) throw DomainError("tricomi_u: requires x > 0");
    if (allow_laguerre && a <= 0 && detail::is_integer(a)) {
        // U(-n,b,x) = (-1)^n n! L_n^{(b-1)}(x)  [DLMF 13.6.19]
        const int n = static_cast<int>(std::llround(-a));
        SignedLogValue l = laguerre_log_impl(n, b - 1.0, x);
        if (l.is_zero()) return l;
        return SignedLogValue{std::lgamma(n + 1.0), (n % 2 == 0) ? +1 : -1} * l;
    }
    if (b < 1.0) {
        // U(a,b,x) = x^{1-b} U(a-b+1, 2-b, x)  [DLMF 13.2.40]
        SignedLogValue u = tricomi_u_dispatch(a - b + 1.0, 2.0 - b, x, ctrl, allow_laguerre);
        if (u.is_zero()) return u;
        return SignedLogValue::from_log((1.0 - b) * std::log(x), +1) * u;
    }
    if (a > 0) return tricomi_u_quadrature(a, b, x, ctrl);

    if (!detail::is_integer(b)) {
        double cancel = 0.0;
        SignedLogValue r = tricomi_u_two_m(a, b, x, ctrl, &cancel);
        if (cancel < 27.0) return r;  // >= ~4 significant digits retained
    }
    // downward recurrence in a from two quadrature seeds [DLMF 13.3.7]:
    //   U(a-1,b,x) = (2a-b+x) U(a,b,x) - a(a-b+1) U(a+1,b,x)
    const int steps = static_cast<int>(std::ceil(-a)) + 1;
    double ah = a + steps;  // in (1, 2]
    SignedLogValue u_hi = tricomi_u_quadrature(ah + 1.0, b, x, ctrl);
    SignedLogValue u_lo = tricomi_u_quadrature(ah, b, x, ctrl);
    for (int i = 0; i < steps; ++i) {
        SignedLogValue next = SignedLogValue::from_real(2.0 * ah - b + x) * u_lo -
                              SignedLogValue::from_real(ah * (ah - b + 1.0)) * u_hi;
        u_hi = u_lo;
        u_lo = next;
        ah -= 1.0;
    }
    return u_lo;
}

}  // namespace

SignedLogValue tricomi_u(double a, double b, double x, const SeriesControl& ctrl) {
    ctrl.validate();
    return tricomi_u_dispatch(a, b, x, ctrl, true);
}

namespace detail {

SignedLogValue tricomi_u_generic(double a, double b, double x, const SeriesControl& ctrl) {
    ctrl.validate();
    return tricomi_u_dispatch(a, b, x, ctrl, false);
}

SignedLogValue laguerre_log(int n, double alpha, double x) {
    if (n < 0) throw DomainError("laguerre: n must be non-negative");
    return laguerre_log_impl(n, alpha, x);
}

SignedLogValue bessel_i_series(double nu, double x, const SeriesControl& ctrl) {
    // I_nu(x) = sum_k (x/2)^{2k+nu} / (k! Gamma(nu+k+1))  [DLMF 10.25.2]
    const double lx2 = std::log(0.5 * x);
    const double q = 0.25 * x * x;
    SeriesAccumulator acc(ctrl);
    SignedLogValue term = SignedLogValue::from_log(nu * lx2, +1) * reciprocal_gamma(nu + 1.0);
    int k = 0;
    while (!acc.add(term)) {
        if (acc.exhausted()) throw NonConvergence("bessel_i: series did not converge");
        term *= SignedLogValue::from_real(q / ((k + 1.0) * (nu + k + 1.0)));
        ++k;
    }
    return acc.sum();
}

SignedLogValue bessel_i_asymptotic(double nu, double x, const SeriesControl& ctrl) {
    // I_nu(x) ~ e^x/(2 pi x)^{1/2} sum_k (1/2+nu)_k (1/2-nu)_k / (k! (2x)^k)
    // [DLMF 10.40.1]; truncated at the smallest term.
    double sum = 1.0, term = 1.0;
    double smallest = std::fabs(term);
    for (int k = 0; k < ctrl.max_terms; ++k) {
        const double next = term * (0.5 + nu + k) * (0.5 - nu + k) / ((k + 1.0) * 2.0 * x);
        if (std::fabs(next) >= smallest) break;  // divergent tail reached
        sum += next;
        term = next;
        smallest = std::fabs(next);
        if (std::fabs(next) < ctrl.rel_tol * std::fabs(sum)) break;
    }
    const double lead = x - 0.5 * std::log(2.0 * kPi * x);
    return SignedLogValue::from_log(lead, +1) * SignedLogValue::from_real(sum);
}

double reg_gamma_q(double a, double x) {
    if (!(a > 0) || x < 0) throw DomainError("reg_gamma_q: requires a > 0, x >= 0");
    if (x == 0) return 1.0;
    const double lg = std::lgamma(a);
    if (x < a + 1.0) {
        // lower series P(a,x), then Q = 1 - P
        double term = 1.0 / a, sum = term;
        for (int k = 1; k < 10000; ++k) {
            term *= x / (a + k);
            sum += term;
            if (term < sum * 1e-16) break;
        }
        const double p = std::exp(a * std::log(x) - x - lg) * sum;
        return 1.0 - p;
    }
    // continued fraction for Q (modified Lentz)
    const double tiny = 1e-300;
    double b0 = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b0, h = d;
    for (int i = 1; i < 10000; ++i) {
        const double an = -i * (i - a);
        b0 += 2.0;
        d = an * d + b0;
        if (std::fabs(d) < tiny) d = tiny;
        c = b0 + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < 1e-16) break;
    }
    return std::exp(a * std::log(x) - x - lg) * h;
}

}  // namespace detail

SignedLogValue bessel_i(double nu, double x, const SeriesControl& ctrl) {
    ctrl.validate();
    if (x < 0) throw DomainError("bessel_i: requires x >= 0");
    if (x == 0.0) {
        if (nu == 0.0) return SignedLogValue::one();
        if (nu > 0.0) return SignedLogValue::zero();
        throw DomainError("bessel_i: I_nu(0) diverges for nu < 0");
    }
    const double crossover = std::max(30.0, 2.0 * nu * nu);
    if (x < crossover) return detail::bessel_i_series(nu, x, ctrl);
    return detail::bessel_i_asymptotic(nu, x, ctrl);
}

SignedLogValue bessel_k(double nu, double x, const SeriesControl& ctrl) {
    ctrl.validate();
    if (!(x > 0)) throw DomainError("bessel_k: requires x > 0");
    nu = std::fabs(nu);  // K_{-nu} = K_nu
    // K_nu(x) = sqrt(pi) (2x)^nu e^{-x} U(nu+1/2, 2nu+1, 2x)  [DLMF 13.6.10]
    SignedLogValue u = tricomi_u(nu + 0.5, 2.0 * nu + 1.0, 2.0 * x, ctrl);
    const double lead = 0.5 * std::log(kPi) + nu * std::log(2.0 * x) - x;
    return SignedLogValue::from_log(lead, +1) * u;
}

double laguerre(int n, double alpha, double x) {
    if (n < 0) throw DomainError("laguerre: n must be non-negative");
    if (n == 0) return 1.0;
    double lprev = 1.0;
    double lcur = alpha + 1 - x;
    for (int k = 1; k < n; ++k) {
        const double lnext = ((2.0 * k + 1.0 + alpha - x) * lcur - (k + alpha) * lprev) / (k + 1.0);
        lprev = lcur;
        lcur = lnext;
    }
    return lcur;
}

double hermite_even_imag(int k, double y) {
    if (k < 0) throw DomainError("hermite_even_imag: k must be non-negative");
    // H_{2k}(i y) = (-1)^k 4^k k! L_k^{(-1/2)}(-y^2), real for real y
    double factor = 1.0;
    for (int i = 1; i <= k; ++i) factor *= 4.0 * i;
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    return sign * factor * laguerre(k, -0.5, -y * y);
}

}  // namespace ncgamma::specfun
