#ifndef TCDLR_REFERENCE_HPP
#define TCDLR_REFERENCE_HPP

// Slow, obviously-correct reference paths: the literal block-circulant
// t-product and a classical full-tensor t-SVT completion baseline. Both are
// size-guarded; they exist for tests and small comparison runs only.

#include "tcdlr/gtsvt.hpp"
#include "tcdlr/solver.hpp"
#include "tcdlr/tensor.hpp"

namespace tcdlr {

inline Tensor3 tprod_bcirc(const Tensor3& a, const Tensor3& b)
{
    if (a.n2() != b.n1() || a.n3() != b.n3())
        throw std::invalid_argument("tprod_bcirc: dimension mismatch");
    const int n1 = a.n1(), k = a.n2(), n2 = b.n2(), n3 = a.n3();
    if (static_cast<long long>(n1) * k * n3 * n3 > 1000000LL)
        throw std::invalid_argument("tprod_bcirc: size guard exceeded");

    MatrixXd bc(static_cast<Eigen::Index>(n1) * n3, static_cast<Eigen::Index>(k) * n3);
    for (int br = 0; br < n3; ++br)
        for (int bcn = 0; bcn < n3; ++bcn) {
            int src = ((br - bcn) % n3 + n3) % n3;  // circulant block index
            bc.block(static_cast<Eigen::Index>(br) * n1,
                     static_cast<Eigen::Index>(bcn) * k, n1, k) = a.slice(src);
        }
    MatrixXd unf(static_cast<Eigen::Index>(k) * n3, n2);
    for (int s = 0; s < n3; ++s)
        unf.middleRows(static_cast<Eigen::Index>(s) * k, k) = b.slice(s);

    MatrixXd prod = bc * unf;
    Tensor3 out(n1, n2, n3);
    for (int s = 0; s < n3; ++s)
        out.slice(s) = prod.middleRows(static_cast<Eigen::Index>(s) * n1, n1);
    return out;
}

// Tensor nuclear norm completion (the convex baseline): classical ADMM with a
// full-tensor t-SVT at every iteration.
inline SolverReport solve_tnn(const Observation& obs, const SolverConfig& cfg)
{
    const int n1 = obs.data.n1(), n2 = obs.data.n2(), n3 = obs.data.n3();
    if (n1 > 200 || n2 > 200 || n3 > 5)
        throw std::invalid_argument("solve_tnn: size guard exceeded (<= 200x200x5)");

    Tensor3 x = obs.data, e(n1, n2, n3), y(n1, n2, n3), x_prev(n1, n2, n3);
    double mu = cfg.mu0;
    const SurrogateSpec id = SurrogateSpec::identity();

    SolverReport rep;
    rep.termination = "max_iters";
    const size_t total = obs.data.size();

    for (int t = 0; t < cfg.max_iters; ++t) {
        Tensor3 c = obs.data - e;
        c.tubes_view() += y.tubes_view() / mu;
        x = gtsvt_full(c, 1.0 / mu, id);

        IterStats it;
        for (size_t n = 0; n < total; ++n) {
            double resid = obs.data.data()[n] - x.data()[n];
            double e_new = obs.mask[n] ? 0.0 : resid + y.data()[n] / mu;
            it.de = std::max(it.de, std::abs(e_new - e.data()[n]));
            e.data()[n] = e_new;
            double viol = resid - e_new;
            it.primal_res = std::max(it.primal_res, std::abs(viol));
            y.data()[n] += mu * viol;
        }
        mu = std::min(cfg.mu_max, cfg.rho * mu);
        it.mu = mu;
        it.dp = t == 0 ? std::numeric_limits<double>::infinity()
                       : (x - x_prev).norm_inf();
        x_prev = x;
        rep.trace.push_back(it);
        rep.iterations = t + 1;
        if (it.primal_res < cfg.eps && it.dp < cfg.eps && it.de < cfg.eps) {
            rep.termination = "converged";
            break;
        }
    }
    rep.recovered = std::move(x);
    return rep;
}

}  // namespace tcdlr

#endif
