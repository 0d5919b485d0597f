#ifndef TCDLR_TENSOR_HPP
#define TCDLR_TENSOR_HPP

//
// Dense third-order tensors and the FFT-domain t-product algebra.
//
// A Tensor3 stores real n1 x n2 x n3 data slice-major (third index outermost),
// column-major within each frontal slice. All t-product machinery works on the
// tube-wise DFT of the tensor (SpectralSlices), where the t-product of two
// tensors reduces to independent complex matrix products per frontal slice.
//
// DFT convention: forward transform is unnormalized, the inverse divides by
// n3. Consequently ||A||_F^2 = (1/n3) * sum_i ||Abar_i||_F^2 (Parseval).
//

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace tcdlr {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXd;

class Tensor3 {
public:
    Tensor3() = default;
    Tensor3(int n1, int n2, int n3)
        : n1_(n1), n2_(n2), n3_(n3), v_(static_cast<size_t>(n1) * n2 * n3, 0.0)
    {
        if (n1 <= 0 || n2 <= 0 || n3 <= 0)
            throw std::invalid_argument("Tensor3: dimensions must be positive");
    }

    int n1() const { return n1_; }
    int n2() const { return n2_; }
    int n3() const { return n3_; }
    size_t size() const { return v_.size(); }

    double operator()(int i, int j, int k) const { return v_[idx(i, j, k)]; }
    double& operator()(int i, int j, int k) { return v_[idx(i, j, k)]; }

    const double* data() const { return v_.data(); }
    double* data() { return v_.data(); }

    Eigen::Map<const MatrixXd> slice(int k) const
    {
        return {v_.data() + static_cast<size_t>(k) * n1_ * n2_, n1_, n2_};
    }
    Eigen::Map<MatrixXd> slice(int k)
    {
        return {v_.data() + static_cast<size_t>(k) * n1_ * n2_, n1_, n2_};
    }

    // flat view with one tube per row: (n1*n2) x n3
    Eigen::Map<const MatrixXd> tubes_view() const
    {
        return {v_.data(), static_cast<Eigen::Index>(n1_) * n2_, n3_};
    }
    Eigen::Map<MatrixXd> tubes_view()
    {
        return {v_.data(), static_cast<Eigen::Index>(n1_) * n2_, n3_};
    }

    bool same_dims(const Tensor3& o) const
    {
        return n1_ == o.n1_ && n2_ == o.n2_ && n3_ == o.n3_;
    }

    double norm_fro() const { return tubes_view().norm(); }
    double norm_inf() const
    {
        return v_.empty() ? 0.0 : tubes_view().cwiseAbs().maxCoeff();
    }

    static Tensor3 identity(int n, int n3)
    {
        Tensor3 t(n, n, n3);
        t.slice(0) = MatrixXd::Identity(n, n);
        return t;
    }

    Tensor3& operator+=(const Tensor3& o)
    {
        check_same(o);
        tubes_view() += o.tubes_view();
        return *this;
    }
    Tensor3& operator-=(const Tensor3& o)
    {
        check_same(o);
        tubes_view() -= o.tubes_view();
        return *this;
    }
    Tensor3& operator*=(double a)
    {
        tubes_view() *= a;
        return *this;
    }

    friend Tensor3 operator+(Tensor3 a, const Tensor3& b) { return a += b; }
    friend Tensor3 operator-(Tensor3 a, const Tensor3& b) { return a -= b; }
    friend Tensor3 operator*(double a, Tensor3 t) { return t *= a; }

private:
    size_t idx(int i, int j, int k) const
    {
        return static_cast<size_t>(k) * n1_ * n2_ + static_cast<size_t>(j) * n1_ + i;
    }
    void check_same(const Tensor3& o) const
    {
        if (!same_dims(o)) throw std::invalid_argument("Tensor3: dimension mismatch");
    }

    int n1_ = 0, n2_ = 0, n3_ = 0;
    std::vector<double> v_;
};

// Tube-wise DFT of a tensor: n3 complex frontal slices.
struct SpectralSlices {
    int n1 = 0, n2 = 0, n3 = 0;
    std::vector<MatrixXcd> s;

    SpectralSlices() = default;
    SpectralSlices(int n1_, int n2_, int n3_)
        : n1(n1_), n2(n2_), n3(n3_), s(n3_, MatrixXcd::Zero(n1_, n2_))
    {
    }
};

namespace detail {

// n-point DFT matrix, F(m,k) = exp(-2*pi*i*m*k/n)
inline MatrixXcd dft_matrix(int n)
{
    MatrixXcd f(n, n);
    const double w = -2.0 * M_PI / n;
    for (int m = 0; m < n; ++m)
        for (int k = 0; k < n; ++k)
            f(m, k) = std::polar(1.0, w * m * k);
    return f;
}

inline void assert_real(double max_imag, double max_real, const char* where)
{
    if (!(max_imag <= 1e-8 * (1.0 + max_real)))
        throw std::runtime_error(std::string("tcdlr: excessive imaginary residue in ") + where);
}

}  // namespace detail

// number of spectral slices that carry independent state for a real tensor;
// the remaining ones are conjugate mirrors
inline int half_slices(int n3) { return n3 / 2 + 1; }

// mirror partner of spectral slice i (0-based); i == mirror_slice(i) for the
// DC slice and, when n3 is even, the Nyquist slice
inline int mirror_slice(int i, int n3) { return i == 0 ? 0 : n3 - i; }

inline SpectralSlices fft_tubes(const Tensor3& t)
{
    SpectralSlices out(t.n1(), t.n2(), t.n3());
    const int n3 = t.n3();
    const MatrixXcd f = detail::dft_matrix(n3);
    Eigen::MatrixXcd spec = t.tubes_view() * f;  // one tube per row
    for (int k = 0; k < n3; ++k)
        out.s[k] = Eigen::Map<const MatrixXcd>(spec.col(k).data(), t.n1(), t.n2());
    return out;
}

inline Tensor3 ifft_tubes(const SpectralSlices& s)
{
    const int n3 = s.n3;
    MatrixXcd spec(static_cast<Eigen::Index>(s.n1) * s.n2, n3);
    for (int k = 0; k < n3; ++k)
        spec.col(k) = Eigen::Map<const Eigen::VectorXcd>(s.s[k].data(),
                                                         static_cast<Eigen::Index>(s.n1) * s.n2);
    MatrixXcd back = spec * detail::dft_matrix(n3).conjugate() / double(n3);
    detail::assert_real(back.imag().cwiseAbs().maxCoeff(),
                        back.real().cwiseAbs().maxCoeff(), "ifft_tubes");
    Tensor3 out(s.n1, s.n2, n3);
    out.tubes_view() = back.real();
    return out;
}

// conjugate transpose: slice 0 transposed, slices k>=1 reversed and transposed
inline Tensor3 ttranspose(const Tensor3& a)
{
    Tensor3 out(a.n2(), a.n1(), a.n3());
    out.slice(0) = a.slice(0).transpose();
    for (int k = 1; k < a.n3(); ++k)
        out.slice(k) = a.slice(a.n3() - k).transpose();
    return out;
}

// t-product via per-slice products in the Fourier domain
inline Tensor3 tprod(const Tensor3& a, const Tensor3& b)
{
    if (a.n2() != b.n1() || a.n3() != b.n3())
        throw std::invalid_argument("tprod: dimension mismatch");
    SpectralSlices sa = fft_tubes(a), sb = fft_tubes(b);
    SpectralSlices sc(a.n1(), b.n2(), a.n3());
    const int nh = half_slices(a.n3());
    for (int k = 0; k < nh; ++k) sc.s[k] = sa.s[k] * sb.s[k];
    for (int k = nh; k < a.n3(); ++k) sc.s[k] = sc.s[a.n3() - k].conjugate();
    return ifft_tubes(sc);
}

}  // namespace tcdlr

#endif
