#ifndef NCGAMMA_SIGNED_LOG_HPP
#define NCGAMMA_SIGNED_LOG_HPP

#include <cmath>
#include <limits>

#include "ncgamma/errors.hpp"

namespace ncgamma {

/// A real number stored as (sign, log of magnitude).  All series in this
/// library accumulate in this representation: individual terms such as
/// Gamma(alpha1+alpha2+k) or (lambda*x/beta)^k overflow doubles long before
/// the summed density does.
struct SignedLogValue {
    double log_abs = -std::numeric_limits<double>::infinity();
    int sign = 0;  // -1, 0, +1; sign == 0 iff the value is exactly zero

    static SignedLogValue zero() { return {}; }
    static SignedLogValue one() { return {0.0, +1}; }

    static SignedLogValue from_real(double v) {
        if (v == 0.0) return zero();
        return {std::log(std::fabs(v)), v > 0 ? +1 : -1};
    }

    static SignedLogValue from_log(double log_abs, int sign = +1) {
        if (sign == 0) return zero();
        return {log_abs, sign};
    }

    double to_real() const {
        if (sign == 0) return 0.0;
        return sign * std::exp(log_abs);
    }

    bool is_zero() const { return sign == 0; }

    SignedLogValue operator-() const {
        return {log_abs, -sign};
    }

    SignedLogValue& operator*=(const SignedLogValue& o) {
        if (sign == 0 || o.sign == 0) { *this = zero(); return *this; }
        log_abs += o.log_abs;
        sign *= o.sign;
        return *this;
    }

    SignedLogValue& operator/=(const SignedLogValue& o) {
        if (o.sign == 0) throw DomainError("SignedLogValue: division by zero");
        if (sign == 0) return *this;
        log_abs -= o.log_abs;
        sign *= o.sign;
        return *this;
    }

    friend SignedLogValue operator*(SignedLogValue a, const SignedLogValue& b) { return a *= b; }
    friend SignedLogValue operator/(SignedLogValue a, const SignedLogValue& b) { return a /= b; }

    // log-sum-exp with sign handling; exact cancellation yields zero()
    friend SignedLogValue operator+(SignedLogValue a, SignedLogValue b) {
        if (a.sign == 0) return b;
        if (b.sign == 0) return a;
        if (b.log_abs > a.log_abs) std::swap(a, b);
        const double d = b.log_abs - a.log_abs;  // <= 0
        if (a.sign == b.sign)
            return {a.log_abs + std::log1p(std::exp(d)), a.sign};
        const double w = -std::expm1(d);  // 1 - e^d, in [0, 1]
        if (w <= 0.0) return zero();
        return {a.log_abs + std::log(w), a.sign};
    }

    friend SignedLogValue operator-(SignedLogValue a, const SignedLogValue& b) {
        return a + (-b);
    }

    SignedLogValue& operator+=(const SignedLogValue& o) { *this = *this + o; return *this; }
};

/// base^e for real exponent; the base must be positive.
inline SignedLogValue slv_pow(const SignedLogValue& base, double e) {
    if (base.sign == 0) {
        if (e > 0) return SignedLogValue::zero();
        throw DomainError("slv_pow: zero base with non-positive exponent");
    }
    if (base.sign < 0) throw DomainError("slv_pow: negative base with real exponent");
    return {base.log_abs * e, +1};
}

/// base^n for integer exponent; any sign.
inline SignedLogValue slv_pow_int(const SignedLogValue& base, long n) {
    if (base.sign == 0) {
        if (n > 0) return SignedLogValue::zero();
        if (n == 0) return SignedLogValue::one();
        throw DomainError("slv_pow_int: zero base with negative exponent");
    }
    const int s = (base.sign < 0 && (n & 1)) ? -1 : +1;
    return {base.log_abs * static_cast<double>(n), s};
}

/// Truncation and tolerance policy shared by every infinite series in the
/// library.  Stopping requires `consecutive_small` successive terms below
/// rel_tol * |partial sum|: the double series for the difference density has
/// non-monotone terms, so a single small term is not a safe stop signal.
struct SeriesControl {
    double rel_tol = 1e-14;
    int max_terms = 500;
    int consecutive_small = 3;

    void validate() const {
        if (!(rel_tol > 0)) throw DomainError("SeriesControl: rel_tol must be > 0");
        if (max_terms < 1) throw DomainError("SeriesControl: max_terms must be >= 1");
        if (consecutive_small < 1) throw DomainError("SeriesControl: consecutive_small must be >= 1");
    }
};

/// Running sum with the SeriesControl stopping rule.
class SeriesAccumulator {
public:
    explicit SeriesAccumulator(const SeriesControl& ctrl) : ctrl_(ctrl) { ctrl.validate(); }

    /// Adds a term; returns true once the stopping criterion is met.
    bool add(const SignedLogValue& term) {
        sum_ += term;
        ++count_;
        const bool small = term.is_zero() ||
            (!sum_.is_zero() && term.log_abs < sum_.log_abs + log_rel_tol());
        run_ = small ? run_ + 1 : 0;
        return run_ >= ctrl_.consecutive_small;
    }

    bool exhausted() const { return count_ >= ctrl_.max_terms; }
    int count() const { return count_; }
    const SignedLogValue& sum() const { return sum_; }

private:
    double log_rel_tol() const { return std::log(ctrl_.rel_tol); }

    SeriesControl ctrl_;
    SignedLogValue sum_ = SignedLogValue::zero();
    int count_ = 0;
    int run_ = 0;
};

}  // namespace ncgamma

#endif
