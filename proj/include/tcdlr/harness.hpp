#ifndef TCDLR_HARNESS_HPP
#define TCDLR_HARNESS_HPP

// Synthetic instances, observation sampling, and recovery metrics.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "tcdlr/rng.hpp"
#include "tcdlr/solver.hpp"
#include "tcdlr/tensor.hpp"

namespace tcdlr {

struct SynthSpec {
    int n1 = 0, n2 = 0, n3 = 0;
    int rank = 0;
    double sample_rate = 0.3;
    uint64_t seed = 0;
};

// M = M1 * M2 with i.i.d. standard Gaussian factors; tubal rank == rank a.s.
inline Tensor3 gen_synthetic(const SynthSpec& spec)
{
    if (spec.rank < 1 || spec.rank > std::min(spec.n1, spec.n2))
        throw std::invalid_argument("gen_synthetic: rank out of range");
    Rng rng = Rng::substream(spec.seed, 0x5E11, 0);
    Tensor3 m1(spec.n1, spec.rank, spec.n3), m2(spec.rank, spec.n2, spec.n3);
    for (size_t i = 0; i < m1.size(); ++i) m1.data()[i] = rng.gaussian();
    for (size_t i = 0; i < m2.size(); ++i) m2.data()[i] = rng.gaussian();
    return tprod(m1, m2);
}

// exactly round(c * n1*n2*n3) positions, uniform without replacement
inline Observation sample_uniform(const Tensor3& m, double c, uint64_t seed)
{
    if (!(c > 0.0 && c <= 1.0))
        throw std::invalid_argument("sample_uniform: rate must be in (0, 1]");
    const size_t total = m.size();
    const size_t count = size_t(std::llround(c * double(total)));
    std::vector<size_t> idx(total);
    std::iota(idx.begin(), idx.end(), size_t{0});
    Rng rng = Rng::substream(seed, 0x0B5, 0);
    // partial Fisher-Yates
    for (size_t i = 0; i < count && i + 1 < total; ++i)
        std::swap(idx[i], idx[i + rng.integer(total - i)]);

    Tensor3 data(m.n1(), m.n2(), m.n3());
    std::vector<uint8_t> mask(total, 0);
    for (size_t i = 0; i < count; ++i) {
        mask[idx[i]] = 1;
        data.data()[idx[i]] = m.data()[idx[i]];
    }
    return Observation(std::move(data), std::move(mask));
}

// squared relative Frobenius error, as reported: ||xhat - m||_F^2 / ||m||_F^2
inline double relerr(const Tensor3& xhat, const Tensor3& m)
{
    if (!xhat.same_dims(m)) throw std::invalid_argument("relerr: dimension mismatch");
    double denom = m.norm_fro();
    if (denom == 0.0) throw std::invalid_argument("relerr: reference tensor is zero");
    double num = (xhat - m).norm_fro();
    return (num * num) / (denom * denom);
}

// PSNR = 10 log10(n1 n2 n3 ||m||_inf^2 / ||xhat - m||_F^2), +inf on exact match
inline double psnr(const Tensor3& xhat, const Tensor3& m)
{
    if (!xhat.same_dims(m)) throw std::invalid_argument("psnr: dimension mismatch");
    double peak = m.norm_inf();
    if (peak == 0.0) throw std::invalid_argument("psnr: reference tensor is zero");
    double err = (xhat - m).norm_fro();
    if (err == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(double(m.size()) * peak * peak / (err * err));
}

struct Metrics {
    double relerr = 0.0;
    double psnr = 0.0;
    double wall_time = 0.0;
    int iterations = 0;
};

}  // namespace tcdlr

#endif
