#ifndef NCGAMMA_MONTECARLO_HPP
#define NCGAMMA_MONTECARLO_HPP

#include <cstdint>
#include <vector>

#include "ncgamma/params.hpp"

namespace ncgamma::mc {

/// Deterministic generator: a fixed (seed, n_streams, n_samples) triple
/// yields bit-identical estimates regardless of thread scheduling.
struct McConfig {
    std::int64_t n_samples = 10'000'000;
    std::uint64_t seed = 20240901;
    int n_streams = 8;

    void validate() const {
        if (n_samples < 1) throw DomainError("McConfig: n_samples must be >= 1");
        if (n_streams < 1) throw DomainError("McConfig: n_streams must be >= 1");
    }
};

struct McEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::int64_t n = 0;
};

/// Self-contained uniform generator (mt19937_64 core) plus the exact
/// samplers used by the harness.  std::*_distribution is avoided on
/// purpose: its output is implementation-defined, which would break the
/// bit-reproducibility contract.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    double uniform();                       // open (0,1)
    double normal();                        // standard normal (polar method)
    std::int64_t poisson(double lambda);    // inversion, chunked for large lambda
    double gamma(double shape, double scale);  // squeeze-accept (Marsaglia-Tsang)

private:
    std::uint64_t next_u64();
    std::uint64_t state_[312];
    int index_;
    bool have_spare_ = false;
    double spare_ = 0.0;

    void seed_state(std::uint64_t seed);
    void twist();
};

/// substream seed derived from the master seed by a counter split
std::uint64_t stream_seed(std::uint64_t master, int stream_index);

/// One draw of Gamma(alpha, beta, lambda): K ~ Poisson(lambda), then a
/// gamma variate with shape alpha+K and scale beta.
double sample_ncg(double alpha, double beta, double lambda, Rng& rng);

/// One draw of X1 +/- X2.
double sample_pair(const PairParams& p, Rng& rng);

/// All draws, parallel across substreams, concatenated in stream order.
std::vector<double> sample_many(const PairParams& p, const McConfig& cfg);

/// Order-statistic quantile with delta-method standard error (density from
/// the exact PDF).
McEstimate mc_quantile(const PairParams& p, double prob, const McConfig& cfg);

/// Empirical exceedance frequency P(X > x) with binomial standard error.
McEstimate mc_tail(const PairParams& p, double x, const McConfig& cfg);

/// Quantile and tail estimates from a pre-drawn sample (sorted in place on
/// first use by the caller); used by the table harness to reuse one sample
/// across several probability levels.
McEstimate quantile_from_sorted(const std::vector<double>& sorted, double prob,
                                const PairParams& p);

}  // namespace ncgamma::mc

#endif
