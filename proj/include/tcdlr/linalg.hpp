#ifndef TCDLR_LINALG_HPP
#define TCDLR_LINALG_HPP

// Thin LAPACK wrappers for the per-slice dense factorizations. Economy-size
// complex SVD goes through zgesdd; QR stays with Eigen's Householder path.

#include <complex>
#include <stdexcept>

#define lapack_complex_double std::complex<double>
#define lapack_complex_float std::complex<float>
#include <lapacke.h>

#include <Eigen/Dense>

namespace tcdlr {

struct SvdEcon {
    Eigen::MatrixXcd u;   // m x r
    Eigen::VectorXd s;    // r, descending
    Eigen::MatrixXcd vh;  // r x n (V conjugate-transposed)
};

// economy SVD, r = min(m, n)
inline SvdEcon svd_econ(const Eigen::MatrixXcd& a)
{
    const int m = int(a.rows()), n = int(a.cols()), r = std::min(m, n);
    SvdEcon out{Eigen::MatrixXcd(m, r), Eigen::VectorXd(r), Eigen::MatrixXcd(r, n)};
    Eigen::MatrixXcd work = a;
    int info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'S', m, n, work.data(), m,
                              out.s.data(), out.u.data(), m, out.vh.data(), r);
    if (info != 0) {
        // zgesdd occasionally fails to converge; zgesvd is the slower fallback
        work = a;
        Eigen::VectorXd superb(std::max(1, r - 1));
        info = LAPACKE_zgesvd(LAPACK_COL_MAJOR, 'S', 'S', m, n, work.data(), m,
                              out.s.data(), out.u.data(), m, out.vh.data(), r,
                              superb.data());
        if (info != 0) throw std::runtime_error("svd_econ: LAPACK did not converge");
    }
    return out;
}

// economy SVD via the plain QR-iteration routine (zgesvd). Slower than
// zgesdd but simpler; used by the reference paths, which favor the most
// conservative routine over speed.
inline SvdEcon svd_econ_qr(const Eigen::MatrixXcd& a)
{
    const int m = int(a.rows()), n = int(a.cols()), r = std::min(m, n);
    SvdEcon out{Eigen::MatrixXcd(m, r), Eigen::VectorXd(r), Eigen::MatrixXcd(r, n)};
    Eigen::MatrixXcd work = a;
    Eigen::VectorXd superb(std::max(1, r - 1));
    int info = LAPACKE_zgesvd(LAPACK_COL_MAJOR, 'S', 'S', m, n, work.data(), m,
                              out.s.data(), out.u.data(), m, out.vh.data(), r,
                              superb.data());
    if (info != 0) throw std::runtime_error("svd_econ_qr: LAPACK did not converge");
    return out;
}

inline Eigen::VectorXd singular_values(const Eigen::MatrixXcd& a)
{
    const int m = int(a.rows()), n = int(a.cols()), r = std::min(m, n);
    Eigen::VectorXd s(r);
    Eigen::MatrixXcd work = a;
    Eigen::MatrixXcd u(1, 1), vh(1, 1);
    int info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'N', m, n, work.data(), m,
                              s.data(), u.data(), m, vh.data(), r);
    if (info != 0) return svd_econ(a).s;
    return s;
}

struct QrEcon {
    Eigen::MatrixXcd q;  // m x r, orthonormal columns
    Eigen::MatrixXcd r;  // r x n, upper triangular
};

// economy QR, r = min(m, n)
inline QrEcon qr_econ(const Eigen::MatrixXcd& a)
{
    const int m = int(a.rows()), n = int(a.cols()), k = std::min(m, n);
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(a);
    QrEcon out;
    out.q = qr.householderQ() * Eigen::MatrixXcd::Identity(m, k);
    out.r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
    return out;
}

// Moore-Penrose pseudo-inverse with relative cutoff on singular values
inline Eigen::MatrixXcd pinv(const Eigen::MatrixXcd& a, double rel_cutoff = 1e-12)
{
    SvdEcon f = svd_econ(a);
    const double cut = rel_cutoff * (f.s.size() ? f.s(0) : 0.0);
    Eigen::VectorXd inv = f.s;
    for (Eigen::Index i = 0; i < inv.size(); ++i)
        inv(i) = f.s(i) > cut ? 1.0 / f.s(i) : 0.0;
    return f.vh.adjoint() * inv.asDiagonal() * f.u.adjoint();
}

}  // namespace tcdlr

#endif
