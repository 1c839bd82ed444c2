#ifndef NCGAMMA_PARAMS_HPP
#define NCGAMMA_PARAMS_HPP

#include <string>

#include "ncgamma/errors.hpp"

namespace ncgamma {

enum class Kind { Sum, Difference };

inline const char* to_string(Kind k) { return k == Kind::Sum ? "sum" : "diff"; }

/// The six-parameter family behind both the sum X1+X2 and the difference
/// X1-X2 of independent non-central gamma variables X_i ~ Gamma(alpha_i,
/// beta_i, lambda_i).  beta is a scale parameter: the density carries
/// e^{-x/beta}.
struct PairParams {
    double alpha1, alpha2;
    double beta1, beta2;
    double lambda1, lambda2;
    Kind kind;

    void validate() const {
        if (!(alpha1 > 0) || !(alpha2 > 0))
            throw DomainError("PairParams: shape parameters must be > 0");
        if (!(beta1 > 0) || !(beta2 > 0))
            throw DomainError("PairParams: scale parameters must be > 0");
        if (lambda1 < 0 || lambda2 < 0)
            throw DomainError("PairParams: non-centrality parameters must be >= 0");
    }

    /// (alpha2, alpha1, beta2, beta1, lambda2, lambda1) with the same kind;
    /// for the difference this is the law of -(X1-X2).
    PairParams swapped() const {
        return {alpha2, alpha1, beta2, beta1, lambda2, lambda1, kind};
    }

    bool operator==(const PairParams&) const = default;
};

/// Bivariate-normal product setup: Z = X*Y with correlation rho, and
/// S_n the sum of n independent copies of Z.
struct CorrelatedNormalParams {
    double mu_x, mu_y;
    double sigma_x, sigma_y;
    double rho;
    int n = 1;

    void validate() const {
        if (!(sigma_x > 0) || !(sigma_y > 0))
            throw DomainError("CorrelatedNormalParams: standard deviations must be > 0");
        if (!(rho > -1 && rho < 1))
            throw DomainError("CorrelatedNormalParams: requires |rho| < 1");
        if (n < 1)
            throw DomainError("CorrelatedNormalParams: requires n >= 1");
    }

    double r_x() const { return mu_x / sigma_x; }
    double r_y() const { return mu_y / sigma_y; }
    double s() const { return sigma_x * sigma_y; }
};

}  // namespace ncgamma

#endif
