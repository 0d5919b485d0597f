#ifndef TCDLR_TSVD_HPP
#define TCDLR_TSVD_HPP

// t-QR, t-SVD, tubal rank and the spectral tensor norms.

#include <limits>

#include "tcdlr/linalg.hpp"
#include "tcdlr/surrogate.hpp"
#include "tcdlr/tensor.hpp"

namespace tcdlr {

struct TSvd {
    Tensor3 u;  // n1 x r x n3
    Tensor3 s;  // r x r x n3, f-diagonal
    Tensor3 v;  // n2 x r x n3
    int r = 0;
};

// t-QR of b (k x n2 x n3), k <= n2: returns (q, r) with b = r * q, where q has
// orthonormal rows per Fourier slice. Per slice this is the reduced QR of
// Bbar_i^*.
inline std::pair<Tensor3, Tensor3> tqr(const Tensor3& b)
{
    const int k = b.n1(), n2 = b.n2(), n3 = b.n3();
    if (k > n2) throw std::invalid_argument("tqr: requires n1 <= n2");
    SpectralSlices sb = fft_tubes(b);
    SpectralSlices sq(k, n2, n3), sr(k, k, n3);
    const int nh = half_slices(n3);
    for (int i = 0; i < nh; ++i) {
        QrEcon f = qr_econ(sb.s[i].adjoint());  // n2 x k
        sq.s[i] = f.q.adjoint();                // k x n2, orthonormal rows
        sr.s[i] = f.r.adjoint();                // k x k
    }
    for (int i = nh; i < n3; ++i) {
        sq.s[i] = sq.s[n3 - i].conjugate();
        sr.s[i] = sr.s[n3 - i].conjugate();
    }
    return {ifft_tubes(sq), ifft_tubes(sr)};
}

inline TSvd tsvd(const Tensor3& a)
{
    const int n1 = a.n1(), n2 = a.n2(), n3 = a.n3(), r = std::min(n1, n2);
    SpectralSlices sa = fft_tubes(a);
    SpectralSlices su(n1, r, n3), ss(r, r, n3), sv(n2, r, n3);
    const int nh = half_slices(n3);
    for (int i = 0; i < nh; ++i) {
        SvdEcon f = svd_econ(sa.s[i]);
        su.s[i] = f.u;
        ss.s[i] = f.s.cast<std::complex<double>>().asDiagonal();
        sv.s[i] = f.vh.adjoint();
    }
    for (int i = nh; i < n3; ++i) {
        su.s[i] = su.s[n3 - i].conjugate();
        ss.s[i] = ss.s[n3 - i].conjugate();
        sv.s[i] = sv.s[n3 - i].conjugate();
    }
    return {ifft_tubes(su), ifft_tubes(ss), ifft_tubes(sv), r};
}

// number of entries of [S]_{:,:,1} above tol * (largest entry)
inline int tubal_rank(const Tensor3& a, double tol = 1e-8)
{
    if (tol < 0.0) throw std::invalid_argument("tubal_rank: tol must be nonnegative");
    SpectralSlices sa = fft_tubes(a);
    const int r = std::min(a.n1(), a.n2());
    // leading frontal slice of S equals the mean of the spectral singular values
    Eigen::VectorXd lead = Eigen::VectorXd::Zero(r);
    for (int i = 0; i < a.n3(); ++i) lead += singular_values(sa.s[i]);
    lead /= double(a.n3());
    const double cut = tol * lead.maxCoeff();
    int rank = 0;
    for (Eigen::Index j = 0; j < lead.size(); ++j)
        if (lead(j) > cut) ++rank;
    return rank;
}

// (1/n3) * sum over all block-diagonal singular values of g(sigma)
inline double norm_star_g(const Tensor3& a, const SurrogateSpec& g)
{
    SpectralSlices sa = fft_tubes(a);
    double acc = 0.0;
    for (int i = 0; i < a.n3(); ++i) {
        Eigen::VectorXd s = singular_values(sa.s[i]);
        for (Eigen::Index j = 0; j < s.size(); ++j) acc += g_eval(g, s(j));
    }
    return acc / double(a.n3());
}

inline double tnn(const Tensor3& a) { return norm_star_g(a, SurrogateSpec::identity()); }

// dual-low-rank norm: infinite when the tubal rank exceeds k
inline double norm_star_kg(const Tensor3& a, const SurrogateSpec& g, int k,
                           double tol = 1e-8)
{
    if (k < 0) throw std::invalid_argument("norm_star_kg: k must be nonnegative");
    if (tubal_rank(a, tol) > k) return std::numeric_limits<double>::infinity();
    return norm_star_g(a, g);
}

}  // namespace tcdlr

#endif
