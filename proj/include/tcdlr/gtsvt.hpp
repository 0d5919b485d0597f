#ifndef TCDLR_GTSVT_HPP
#define TCDLR_GTSVT_HPP

//
// Generalized tensor singular value thresholding
//
//     S_{tau,g}(Y) = argmin_X 0.5*||Y - X||_F^2 + tau*||X||_{*,g}
//
// computed either on the full tensor (per-slice SVD of the spectrum) or on a
// factored input A * B, where only the small n1 x k slice products are ever
// decomposed: QR of B^* gives B = R * Q with row-orthonormal Q, the product
// collapses to Z * Q with Z = A * R, and S_{tau,g}(A*B) = S_{tau,g}(Z) * Q.
//
// Both the Frobenius term and ||.||_{*,g} carry the same 1/n3 factor in the
// Fourier domain, so the scalar prox weight per singular value is tau itself.
//

#include <utility>
#include <vector>

#include "tcdlr/linalg.hpp"
#include "tcdlr/surrogate.hpp"
#include "tcdlr/tensor.hpp"

namespace tcdlr {

// per-slice factor pair for the leading (non-mirror) spectral slices
struct FactorState {
    int n1 = 0, n2 = 0, n3 = 0;
    std::vector<MatrixXcd> z;  // n1 x k_i
    std::vector<MatrixXcd> q;  // k_i x n2, orthonormal rows
    std::vector<int> k;        // per-slice rank

    int head() const { return int(z.size()); }
};

namespace detail {

// threshold the singular values of one spectral slice
inline MatrixXcd gsvt_slice(const MatrixXcd& y, double tau, const SurrogateSpec& g,
                            bool reference_svd = false)
{
    if (y.cwiseAbs().maxCoeff() == 0.0) return MatrixXcd::Zero(y.rows(), y.cols());
    SvdEcon f = reference_svd ? svd_econ_qr(y) : svd_econ(y);
    Eigen::VectorXd t(f.s.size());
    for (Eigen::Index j = 0; j < f.s.size(); ++j) t(j) = prox(g, f.s(j), tau);
    return f.u * t.asDiagonal() * f.vh;
}

}  // namespace detail

inline Tensor3 gtsvt_full(const Tensor3& y, double tau, const SurrogateSpec& g)
{
    if (tau < 0.0) throw std::invalid_argument("gtsvt_full: tau must be nonnegative");
    if (tau == 0.0) return y;
    SpectralSlices sy = fft_tubes(y);
    const int n3 = y.n3(), nh = half_slices(n3);
    // the full path is the slow reference; it takes the conservative
    // QR-iteration SVD rather than the divide-and-conquer one
    for (int i = 0; i < nh; ++i)
        sy.s[i] = detail::gsvt_slice(sy.s[i], tau, g, /*reference_svd=*/true);
    for (int i = nh; i < n3; ++i) sy.s[i] = sy.s[n3 - i].conjugate();
    return ifft_tubes(sy);
}

inline std::pair<Tensor3, FactorState> gtsvt_factored(const Tensor3& a,
                                                      const Tensor3& b, double tau,
                                                      const SurrogateSpec& g)
{
    const int n1 = a.n1(), k = a.n2(), n2 = b.n2(), n3 = a.n3();
    if (b.n1() != k || b.n3() != n3)
        throw std::invalid_argument("gtsvt_factored: dimension mismatch");
    if (k > std::min(n1, n2))
        throw std::invalid_argument("gtsvt_factored: requires k <= min(n1, n2)");

    SpectralSlices sa = fft_tubes(a), sb = fft_tubes(b);
    const int nh = half_slices(n3);

    FactorState state;
    state.n1 = n1;
    state.n2 = n2;
    state.n3 = n3;
    state.z.resize(nh);
    state.q.resize(nh);
    state.k.assign(nh, k);

    SpectralSlices sx(n1, n2, n3);
    for (int i = 0; i < nh; ++i) {
        QrEcon f = qr_econ(sb.s[i].adjoint());   // Bbar_i^* = Qc * Rc
        state.q[i] = f.q.adjoint();              // k x n2
        state.z[i] = sa.s[i] * f.r.adjoint();    // Zbar_i = Abar_i * Rbar_i
        sx.s[i] = (tau == 0.0 ? state.z[i] : detail::gsvt_slice(state.z[i], tau, g)) *
                  state.q[i];
    }
    for (int i = nh; i < n3; ++i) sx.s[i] = sx.s[n3 - i].conjugate();
    return {ifft_tubes(sx), std::move(state)};
}

}  // namespace tcdlr

#endif
