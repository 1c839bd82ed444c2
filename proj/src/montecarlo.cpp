#include "ncgamma/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "ncgamma/exact.hpp"

namespace ncgamma::mc {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

}  // namespace

// mt19937-64 (Matsumoto & Nishimura), seeded through splitmix64 so that
// nearby master seeds give unrelated streams
Rng::Rng(std::uint64_t seed) { seed_state(seed); }

void Rng::seed_state(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (int i = 0; i < 312; ++i) state_[i] = splitmix64(sm);
    index_ = 312;
}

void Rng::twist() {
    constexpr std::uint64_t kLoMask = (1ull << 31) - 1;
    constexpr std::uint64_t kHiMask = ~kLoMask;
    for (int i = 0; i < 312; ++i) {
        const std::uint64_t x = (state_[i] & kHiMask) | (state_[(i + 1) % 312] & kLoMask);
        std::uint64_t y = x >> 1;
        if (x & 1ull) y ^= 0xB5026F5AA96619E9ull;
        state_[i] = state_[(i + 156) % 312] ^ y;
    }
    index_ = 0;
}

std::uint64_t Rng::next_u64() {
    if (index_ >= 312) twist();
    std::uint64_t x = state_[index_++];
    x ^= (x >> 29) & 0x5555555555555555ull;
    x ^= (x << 17) & 0x71D67FFFEDA60000ull;
    x ^= (x << 37) & 0xFFF7EEE000000000ull;
    x ^= x >> 43;
    return x;
}

double Rng::uniform() {
    // open (0,1): 53-bit mantissa, offset by half an ulp
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * m;
    have_spare_ = true;
    return u * m;
}

std::int64_t Rng::poisson(double lambda) {
    if (lambda < 0) throw DomainError("poisson: lambda must be >= 0");
    if (lambda == 0.0) return 0;
    // split large means into chunks so exp(-chunk) stays on scale; the sum
    // of independent Poissons is exactly Poisson
    std::int64_t total = 0;
    while (lambda > 30.0) {
        const double chunk = 30.0;
        const double limit = std::exp(-chunk);
        double prod = uniform();
        std::int64_t k = 0;
        while (prod > limit) {
            ++k;
            prod *= uniform();
        }
        total += k;
        lambda -= chunk;
    }
    const double limit = std::exp(-lambda);
    double prod = uniform();
    std::int64_t k = 0;
    while (prod > limit) {
        ++k;
        prod *= uniform();
    }
    return total + k;
}

double Rng::gamma(double shape, double scale) {
    if (!(shape > 0) || !(scale > 0))
        throw DomainError("gamma: shape and scale must be > 0");
    // Marsaglia-Tsang squeeze-accept for shape >= 1; shape < 1 boosted to
    // shape+1 with the U^{1/shape} power correction
    if (shape < 1.0) {
        const double u = uniform();
        return gamma(shape + 1.0, scale) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    while (true) {
        double z, v;
        do {
            z = normal();
            v = 1.0 + c * z;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = uniform();
        if (u < 1.0 - 0.0331 * z * z * z * z) return scale * d * v;
        if (std::log(u) < 0.5 * z * z + d * (1.0 - v + std::log(v))) return scale * d * v;
    }
}

std::uint64_t stream_seed(std::uint64_t master, int stream_index) {
    std::uint64_t s = master;
    std::uint64_t h = splitmix64(s);
    s = master ^ (0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(stream_index + 1));
    h ^= splitmix64(s);
    return h;
}

double sample_ncg(double alpha, double beta, double lambda, Rng& rng) {
    if (!(alpha > 0) || !(beta > 0) || lambda < 0)
        throw DomainError("sample_ncg: requires alpha, beta > 0 and lambda >= 0");
    const std::int64_t k = rng.poisson(lambda);
    return rng.gamma(alpha + static_cast<double>(k), beta);
}

double sample_pair(const PairParams& p, Rng& rng) {
    p.validate();
    const double x1 = sample_ncg(p.alpha1, p.beta1, p.lambda1, rng);
    const double x2 = sample_ncg(p.alpha2, p.beta2, p.lambda2, rng);
    return p.kind == Kind::Difference ? x1 - x2 : x1 + x2;
}

std::vector<double> sample_many(const PairParams& p, const McConfig& cfg) {
    p.validate();
    cfg.validate();
    std::vector<double> out(static_cast<size_t>(cfg.n_samples));
    const int ns = cfg.n_streams;
    const std::int64_t base = cfg.n_samples / ns;
    const std::int64_t extra = cfg.n_samples % ns;

    std::vector<std::thread> workers;
    std::int64_t offset = 0;
    for (int i = 0; i < ns; ++i) {
        const std::int64_t count = base + (i < extra ? 1 : 0);
        workers.emplace_back([&, i, offset, count] {
            Rng rng(stream_seed(cfg.seed, i));
            for (std::int64_t j = 0; j < count; ++j)
                out[static_cast<size_t>(offset + j)] = sample_pair(p, rng);
        });
        offset += count;
    }
    for (auto& w : workers) w.join();
    return out;
}

McEstimate quantile_from_sorted(const std::vector<double>& sorted, double prob,
                                const PairParams& p) {
    const std::int64_t n = static_cast<std::int64_t>(sorted.size());
    std::int64_t k = static_cast<std::int64_t>(std::ceil(prob * static_cast<double>(n))) - 1;
    k = std::clamp<std::int64_t>(k, 0, n - 1);
    const double q = sorted[static_cast<size_t>(k)];
    // binomial-density delta method, density from the exact PDF
    double f = 0.0;
    try {
        f = exact::pdf_exact(p, q);
    } catch (const DomainError&) {
        f = 0.0;
    }
    const double se_p = std::sqrt(prob * (1.0 - prob) / static_cast<double>(n));
    const double se = f > 0 ? se_p / f : std::numeric_limits<double>::infinity();
    return {q, se, n};
}

McEstimate mc_quantile(const PairParams& p, double prob, const McConfig& cfg) {
    if (!(prob > 0 && prob < 1)) throw DomainError("mc_quantile: prob must lie in (0,1)");
    cfg.validate();
    const double edge = std::min(prob, 1.0 - prob);
    if (static_cast<double>(cfg.n_samples) * edge < 100.0)
        throw DomainError("mc_quantile: insufficient samples for the requested tail");
    std::vector<double> xs = sample_many(p, cfg);
    std::sort(xs.begin(), xs.end());
    return quantile_from_sorted(xs, prob, p);
}

McEstimate mc_tail(const PairParams& p, double x, const McConfig& cfg) {
    cfg.validate();
    const int ns = cfg.n_streams;
    const std::int64_t base = cfg.n_samples / ns;
    const std::int64_t extra = cfg.n_samples % ns;

    std::vector<std::int64_t> counts(static_cast<size_t>(ns), 0);
    std::vector<std::thread> workers;
    for (int i = 0; i < ns; ++i) {
        const std::int64_t count = base + (i < extra ? 1 : 0);
        workers.emplace_back([&, i, count] {
            Rng rng(stream_seed(cfg.seed, i));
            std::int64_t exceed = 0;
            for (std::int64_t j = 0; j < count; ++j)
                if (sample_pair(p, rng) > x) ++exceed;
            counts[static_cast<size_t>(i)] = exceed;
        });
    }
    for (auto& w : workers) w.join();
    std::int64_t exceed = 0;
    for (std::int64_t c : counts) exceed += c;  // fixed reduction order
    const double n = static_cast<double>(cfg.n_samples);
    const double phat = static_cast<double>(exceed) / n;
    return {phat, std::sqrt(phat * (1.0 - phat) / n), cfg.n_samples};
}

}  // namespace ncgamma::mc
