// End-to-end acceptance checks. Each test prints exactly one
// "[criterion N] <name>: PASS|FAIL" line so the suite doubles as a checklist.

#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>

#include "tcdlr/tcdlr.hpp"
#include "test_util.hpp"

using namespace tcdlr;
using test::random_tensor;
using test::rel_fro;

namespace {

void report(int num, const char* name, bool ok)
{
    std::printf("[criterion %d] %s: %s\n", num, name, ok ? "PASS" : "FAIL");
    std::fflush(stdout);
    EXPECT_TRUE(ok) << "criterion " << num << ": " << name;
}

MatrixXcd random_complex(int rows, int cols, Rng& rng)
{
    MatrixXcd m(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i)
            m(i, j) = {rng.gaussian(), rng.gaussian()};
    return m;
}

SliceState state_with_spectrum(int n1, int n2, const Eigen::VectorXd& lam, Rng& rng)
{
    const int k = int(lam.size());
    QrEcon qu = qr_econ(random_complex(n1, k, rng));
    QrEcon qv = qr_econ(random_complex(k, k, rng));
    QrEcon qq = qr_econ(random_complex(n2, k, rng));
    SliceState st;
    st.z = qu.q * lam.cast<std::complex<double>>().asDiagonal() * qv.q.adjoint();
    st.q = qq.q.adjoint();
    return st;
}

SolverConfig desk_cfg()
{
    SolverConfig cfg;
    cfg.surrogate = SurrogateSpec::lp(0.8);
    cfg.k_min = 5;
    cfg.k_max = 100;
    cfg.l = 4;
    cfg.max_iters = 500;
    cfg.threads = 2;
    return cfg;
}

struct DeskRun {
    double err = 0.0;
    std::vector<int> ranks;
};

DeskRun desk_run(int seed, int k_init)
{
    SynthSpec spec{200, 200, 3, 20, 0.3, uint64_t(seed)};
    Tensor3 m = gen_synthetic(spec);
    Observation obs = sample_uniform(m, 0.3, uint64_t(seed) + 100);
    SolverConfig cfg = desk_cfg();
    cfg.k_init = k_init;
    cfg.seed = uint64_t(seed);
    SolverReport rep = solve_tcdlr_re(obs, cfg);
    return {relerr(rep.recovered, m), rep.final_ranks};
}

template <typename Fn>
double best_of(int reps, Fn fn)
{
    double best = std::numeric_limits<double>::infinity();
    for (int r = 0; r < reps; ++r) {
        auto t0 = std::chrono::steady_clock::now();
        fn();
        best = std::min(best, std::chrono::duration<double>(
                                  std::chrono::steady_clock::now() - t0)
                                  .count());
    }
    return best;
}

double loglog_slope(const std::vector<double>& n, const std::vector<double>& t)
{
    const int m = int(n.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < m; ++i) {
        double x = std::log(n[i]), y = std::log(t[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace

TEST(Acceptance, Criterion01_AlgebraOracle)
{
    Rng rng(11);
    bool ok = true;
    for (int rep = 0; rep < 60; ++rep) {
        int n1 = 1 + int(rng.integer(6)), k = 1 + int(rng.integer(6));
        int n2 = 1 + int(rng.integer(6)), n3 = 1 + int(rng.integer(5));
        Tensor3 a = random_tensor(n1, k, n3, rng), b = random_tensor(k, n2, n3, rng);
        if (test::max_abs_diff(tprod(a, b), tprod_bcirc(a, b)) > 1e-10) ok = false;
    }
    report(1, "t-product matches block-circulant oracle (60 shapes, 1e-10)", ok);
}

TEST(Acceptance, Criterion02_FactoredThresholdingEquivalence)
{
    Rng rng(12);
    const SurrogateSpec kinds[] = {
        SurrogateSpec::identity(),    SurrogateSpec::lp(0.8),
        SurrogateSpec::geman(1.0),    SurrogateSpec::laplace(1.0),
        SurrogateSpec::log_kind(1.0), SurrogateSpec::logarithm(2.0),
        SurrogateSpec::etp(1.5),
    };
    bool ok = true;
    for (int rep = 0; rep < 20; ++rep) {
        Tensor3 a = random_tensor(20, 5, 3, rng), b = random_tensor(5, 15, 3, rng);
        for (const auto& g : kinds) {
            auto [x, state] = gtsvt_factored(a, b, 0.2, g);
            if (rel_fro(x, gtsvt_full(tprod(a, b), 0.2, g)) > 1e-8) ok = false;
        }
    }
    report(2, "factored thresholding equals full path (20 pairs x 7 kinds, 1e-8)", ok);
}

TEST(Acceptance, Criterion03_ScalarProxOptimality)
{
    Rng rng(13);
    const SurrogateSpec kinds[] = {
        SurrogateSpec::identity(),    SurrogateSpec::lp(0.8),
        SurrogateSpec::lp(0.5),      SurrogateSpec::geman(1.0),
        SurrogateSpec::laplace(1.0), SurrogateSpec::log_kind(1.0),
        SurrogateSpec::logarithm(2.0), SurrogateSpec::etp(1.5),
    };
    auto obj = [](const SurrogateSpec& s, double sigma, double tau, double x) {
        double d = x - sigma;
        return 0.5 * d * d + tau * g_eval(s, x);
    };
    bool ok = true;
    for (int rep = 0; rep < 1000; ++rep) {
        const SurrogateSpec& s = kinds[rep % 8];
        double sigma = 10.0 * rng.uniform(), tau = 5.0 * rng.uniform();
        double fx = obj(s, sigma, tau, prox(s, sigma, tau));
        double grid = obj(s, sigma, tau, 0.0);
        for (double g = 1e-4; g <= sigma + tau; g += 1e-4)
            grid = std::min(grid, obj(s, sigma, tau, g));
        if (fx > grid + 1e-12) ok = false;
    }
    report(3, "scalar prox beats 1e-4 grid on 1000 random triples", ok);
}

TEST(Acceptance, Criterion04_RankAdjustmentConservation)
{
    // increase must preserve the factor product exactly; decrease must lose
    // exactly the tail singular energy
    const int n1 = 30, n2 = 25;
    int inc_fired = 0, inc_ok = 0;
    for (int rep = 0; rep < 100; ++rep) {
        Rng rng(400 + rep);
        SliceState st;
        st.z = random_complex(n1, 5, rng);
        st.q = qr_econ(random_complex(n2, 5, rng)).q.adjoint();
        // rank-1 spike residual keeps the trigger statistic near sqrt(n1 n2),
        // well above the threshold
        Eigen::VectorXcd u = random_complex(n1, 1, rng).col(0).normalized();
        Eigen::VectorXcd v = random_complex(n2, 1, rng).col(0).normalized();
        MatrixXcd c = st.z * st.q + random_complex(n1, n2, rng) / std::sqrt(2.0) +
                      100.0 * std::sqrt(double(n1) * n2) * u * v.adjoint();
        MatrixXcd before = st.z * st.q;
        RankEstConfig cfg{1, 20, 2, 1.0, 750};
        if (rank_increase(st, c, cfg, rng)) {
            ++inc_fired;
            double rel = (st.z * st.q - before).norm() / before.norm();
            if (rel <= 1e-9) ++inc_ok;
        }
    }
    bool increase_ok = inc_fired >= 90 && inc_ok == inc_fired;

    int dec_ok = 0;
    for (int rep = 0; rep < 100; ++rep) {
        Rng rng(500 + rep);
        Eigen::VectorXd lam(8);
        lam << 40, 30, 25, 20, 1e-4, 8e-5, 5e-5, 2e-5;
        SliceState st = state_with_spectrum(n1, n2, lam, rng);
        MatrixXcd before = st.z * st.q;
        RankEstConfig cfg{1, 20, 1, 1.0, 750};
        if (!rank_decrease(st, cfg)) continue;
        double err = (st.z * st.q - before).norm();
        double tail = std::sqrt(lam.tail(8 - st.k()).squaredNorm());
        if (std::abs(err - tail) <= 1e-8 * (1.0 + tail)) ++dec_ok;
    }
    bool decrease_ok = dec_ok == 100;
    report(4, "rank increase conserves ZQ (1e-9), decrease loses only tail energy (1e-8)",
           increase_ok && decrease_ok);
}

TEST(Acceptance, Criterion05_DeskScaleRecovery)
{
    int err_ok = 0, rank_ok = 0;
    for (int seed = 0; seed < 10; ++seed) {
        DeskRun run = desk_run(seed, 30);
        if (run.err <= 1e-2) ++err_ok;
        bool in_band = true;
        for (int k : run.ranks)
            if (k < 18 || k > 22) in_band = false;
        if (in_band) ++rank_ok;
    }
    std::printf("  desk scale n=200 r=20 c=0.3: relerr<=1e-2 on %d/10, ranks in [18,22] on %d/10\n",
                err_ok, rank_ok);
    report(5, "desk-scale recovery and rank identification", err_ok >= 9 && rank_ok >= 8);
}

TEST(Acceptance, Criterion06_FullScaleScriptDocumented)
{
    // the n=1000 reproduction runs out of CI; here we only require the
    // documented driver script to exist and be executable
    namespace fs = std::filesystem;
    fs::path script = fs::path(TCDLR_SOURCE_DIR) / "scripts" / "full_scale.sh";
    bool ok = fs::exists(script) &&
              (fs::status(script).permissions() & fs::perms::owner_exec) !=
                  fs::perms::none;
    report(6, "full-scale run delegated to scripts/full_scale.sh (out of CI)", ok);
}

TEST(Acceptance, Criterion07_RankMisinitializationRobustness)
{
    int low_ok = 0, high_ok = 0;
    for (int seed = 0; seed < 10; ++seed) {
        if (desk_run(seed, 5).err <= 1e-2) ++low_ok;
        if (desk_run(seed, 60).err <= 1e-2) ++high_ok;
    }
    std::printf("  k_init=5 recovered %d/10, k_init=60 recovered %d/10\n", low_ok, high_ok);
    report(7, "recovery is robust to rank under- and over-initialization", low_ok >= 8 && high_ok >= 8);
}

TEST(Acceptance, Criterion08_PropertySuites)
{
    Rng rng(88);
    bool ok = true;

    // squared distance dominates the squared spectral-value distance
    for (int rep = 0; rep < 100 && ok; ++rep) {
        Tensor3 ty = random_tensor(5, 4, 3, rng), tx = random_tensor(5, 4, 3, rng);
        SpectralSlices sy = fft_tubes(ty), sx = fft_tubes(tx);
        std::vector<double> vy, vx;
        for (int i = 0; i < 3; ++i) {
            Eigen::VectorXd a = singular_values(sy.s[i]), b = singular_values(sx.s[i]);
            vy.insert(vy.end(), a.data(), a.data() + a.size());
            vx.insert(vx.end(), b.data(), b.data() + b.size());
        }
        std::sort(vy.rbegin(), vy.rend());
        std::sort(vx.rbegin(), vx.rend());
        double rhs = 0.0;
        for (size_t j = 0; j < vy.size(); ++j) rhs += (vy[j] - vx[j]) * (vy[j] - vx[j]);
        rhs /= 3.0;
        double lhs = (ty - tx).norm_fro();
        lhs *= lhs;
        if (lhs + 1e-9 * (1.0 + lhs) < rhs) ok = false;
    }

    // row-orthonormal factors preserve Frobenius and surrogate norms
    SurrogateSpec g = SurrogateSpec::lp(0.8);
    for (int rep = 0; rep < 100 && ok; ++rep) {
        Tensor3 b = random_tensor(6, 4, 3, rng);
        auto [q, r] = tqr(random_tensor(4, 9, 3, rng));
        Tensor3 bq = tprod(b, q);
        if (std::abs(bq.norm_fro() - b.norm_fro()) > 1e-8 * (1.0 + b.norm_fro())) ok = false;
        double nb = norm_star_g(b, g);
        if (std::abs(norm_star_g(bq, g) - nb) > 1e-8 * (1.0 + nb)) ok = false;
    }

    // FFT round trip and Parseval
    for (int rep = 0; rep < 100 && ok; ++rep) {
        Tensor3 t = random_tensor(4, 3, 5, rng);
        SpectralSlices s = fft_tubes(t);
        if (test::max_abs_diff(ifft_tubes(s), t) > 1e-10) ok = false;
        double spec = 0.0;
        for (int k = 0; k < 5; ++k) spec += s.s[k].squaredNorm();
        double f2 = t.norm_fro() * t.norm_fro();
        if (std::abs(f2 - spec / 5.0) > 1e-10 * (1.0 + f2)) ok = false;
    }

    // the noise variable stays zero on the observed support for a whole trace
    {
        SynthSpec spec{40, 40, 3, 5, 0.4, 7};
        Tensor3 m = gen_synthetic(spec);
        Observation obs = sample_uniform(m, 0.4, 8);
        SolverConfig cfg = desk_cfg();
        cfg.k_min = 2;
        cfg.k_init = 8;
        SolverReport rep = solve_tcdlr_re(obs, cfg);
        for (const IterStats& it : rep.trace)
            if (it.e_on_omega != 0.0) ok = false;
    }

    report(8, "spectral inequalities, orthonormal invariance, Parseval, support invariant", ok);
}

TEST(Acceptance, Criterion09_BaselineOrdering)
{
    double sum_re = 0.0, sum_tnn = 0.0;
    for (int seed = 0; seed < 5; ++seed) {
        SynthSpec spec{200, 200, 3, 20, 0.3, uint64_t(seed)};
        Tensor3 m = gen_synthetic(spec);
        Observation obs = sample_uniform(m, 0.3, uint64_t(seed) + 100);

        sum_re += desk_run(seed, 30).err;

        SolverConfig cfg;
        cfg.max_iters = 300;
        sum_tnn += relerr(solve_tnn(obs, cfg).recovered, m);
    }
    std::printf("  mean relerr: rank-estimating %.3e vs nuclear-norm baseline %.3e\n",
                sum_re / 5.0, sum_tnn / 5.0);
    report(9, "rank-estimating solver is no worse than the nuclear-norm baseline",
           sum_re <= sum_tnn + 1e-12);
}

TEST(Acceptance, Criterion10_ComplexityTrend)
{
    SurrogateSpec g = SurrogateSpec::lp(0.8);
    Rng rng(101);

    std::vector<double> nf = {200, 400, 800}, tf;
    for (double n : nf) {
        Tensor3 a = random_tensor(int(n), 20, 3, rng), b = random_tensor(20, int(n), 3, rng);
        tf.push_back(best_of(3, [&] { gtsvt_factored(a, b, 0.1, g); }));
    }
    // start at n=200: below that, per-call overhead inflates the small-size
    // timing and biases the fitted exponent downward
    std::vector<double> nu = {200, 400, 800}, tu;
    for (double n : nu) {
        Tensor3 y = random_tensor(int(n), int(n), 3, rng);
        tu.push_back(best_of(3, [&] { gtsvt_full(y, 0.1, g); }));
    }
    double slope_f = loglog_slope(nf, tf), slope_u = loglog_slope(nu, tu);
    std::printf("  fitted exponents: factored %.2f (want <= 2.5), full %.2f (want >= 2.8)\n",
                slope_f, slope_u);
    report(10, "factored thresholding scales sub-quadratically, full path cubically",
           slope_f <= 2.5 && slope_u >= 2.8);
}
