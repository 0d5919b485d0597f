#ifndef TCDLR_RNG_HPP
#define TCDLR_RNG_HPP

// Seeded random streams. Every random draw in the library flows from an
// explicit seed; per-slice, per-iteration substreams are derived by mixing so
// results do not depend on the degree of parallelism.

#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace tcdlr {

namespace detail {
inline uint64_t splitmix64(uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}
}  // namespace detail

class Rng {
public:
    explicit Rng(uint64_t seed) : eng_(seed) {}

    // substream for (iteration, slice) pairs, order-independent
    static Rng substream(uint64_t seed, uint64_t a, uint64_t b)
    {
        uint64_t s = detail::splitmix64(seed ^ detail::splitmix64(a + 1));
        return Rng(detail::splitmix64(s ^ detail::splitmix64(b + 1)));
    }

    double gaussian() { return normal_(eng_); }
    double uniform() { return unif_(eng_); }
    uint64_t integer(uint64_t bound) { return eng_() % bound; }

    Eigen::VectorXd gaussian_vector(int n)
    {
        Eigen::VectorXd v(n);
        for (int i = 0; i < n; ++i) v(i) = gaussian();
        return v;
    }
    Eigen::MatrixXd gaussian_matrix(int rows, int cols)
    {
        Eigen::MatrixXd m(rows, cols);
        // column-major fill order
        for (int j = 0; j < cols; ++j)
            for (int i = 0; i < rows; ++i) m(i, j) = gaussian();
        return m;
    }

    std::mt19937_64& engine() { return eng_; }

private:
    std::mt19937_64 eng_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> unif_{0.0, 1.0};
};

}  // namespace tcdlr

#endif
