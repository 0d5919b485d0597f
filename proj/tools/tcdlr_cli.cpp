// Command-line front end: synthetic benchmarks, file-based completion,
// phase-transition sweeps, image inpainting, and kernel timing.
//
// Exit codes: 0 success, 2 file/format error, 3 solver hit the iteration cap
// (the result is still written).

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "CLI11.hpp"
#include "tcdlr/tcdlr.hpp"

using namespace tcdlr;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFormat = 2;
constexpr int kExitMaxIters = 3;

struct CommonOpts {
    std::string surrogate = "lp";
    double p = 0.8;
    double gamma = 1.0;
    double sample_rate = 0.3;
    int rank = 10;
    int k_init = 0;
    int k_min = 25;
    int k_max = 0;
    bool fixed_rank = false;
    double rho = 1.3;
    double mu0 = 1e-4;
    double mu_max = 1e14;
    double eps = 1e-9;
    int max_iters = 500;
    uint64_t seed = 0;
    int threads = 1;
    std::string out;
};

void add_solver_flags(CLI::App* cmd, CommonOpts& o)
{
    cmd->add_option("--surrogate", o.surrogate, "surrogate penalty")
        ->check(CLI::IsMember({"identity", "lp", "geman", "laplace", "log", "logarithm",
                               "etp"}));
    cmd->add_option("--p", o.p, "exponent for the lp surrogate");
    cmd->add_option("--gamma", o.gamma, "shape parameter for the other surrogates");
    cmd->add_option("--k-init", o.k_init, "initial per-slice factor rank (0 = k_max)");
    cmd->add_option("--k-min", o.k_min, "lower bound for rank estimation");
    cmd->add_option("--k-max", o.k_max, "upper bound for rank estimation (0 = auto)");
    cmd->add_flag("--fixed-rank", o.fixed_rank, "disable rank estimation");
    cmd->add_option("--rho", o.rho, "penalty growth factor");
    cmd->add_option("--mu0", o.mu0, "initial penalty parameter");
    cmd->add_option("--mu-max", o.mu_max, "penalty parameter cap");
    cmd->add_option("--eps", o.eps, "convergence tolerance");
    cmd->add_option("--max-iters", o.max_iters, "iteration cap");
    cmd->add_option("--seed", o.seed, "RNG seed");
    cmd->add_option("--threads", o.threads, "worker threads for per-slice work");
}

SurrogateSpec make_surrogate(const CommonOpts& o)
{
    SurrogateKind kind = surrogate_kind_from_string(o.surrogate);
    SurrogateSpec s;
    s.kind = kind;
    s.p = o.p;
    s.gamma = o.gamma;
    validate(s);
    return s;
}

SolverConfig make_config(const CommonOpts& o)
{
    SolverConfig cfg;
    cfg.surrogate = make_surrogate(o);
    cfg.rho = o.rho;
    cfg.mu0 = o.mu0;
    cfg.mu_max = o.mu_max;
    cfg.eps = o.eps;
    cfg.max_iters = o.max_iters;
    cfg.k_init = o.k_init;
    cfg.k_min = o.k_min;
    cfg.k_max = o.k_max;
    cfg.fixed_rank = o.fixed_rank;
    cfg.seed = o.seed;
    cfg.threads = o.threads;
    return cfg;
}

void echo_config(const std::string& cmd, const CommonOpts& o)
{
    std::cout << "config: command=" << cmd << " surrogate=" << o.surrogate
              << " p=" << o.p << " gamma=" << o.gamma << " sample_rate=" << o.sample_rate
              << " rank=" << o.rank << " k_init=" << o.k_init << " k_min=" << o.k_min
              << " k_max=" << o.k_max << " fixed_rank=" << (o.fixed_rank ? 1 : 0)
              << " rho=" << o.rho << " mu0=" << o.mu0 << " mu_max=" << o.mu_max
              << " eps=" << o.eps << " max_iters=" << o.max_iters << " seed=" << o.seed
              << " threads=" << o.threads << "\n";
}

std::string ranks_to_string(const std::vector<int>& r)
{
    std::ostringstream os;
    for (size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
    return os.str();
}

struct TimedSolve {
    SolverReport report;
    double seconds = 0.0;
};

TimedSolve run_solver(const Observation& obs, const SolverConfig& cfg)
{
    auto t0 = std::chrono::steady_clock::now();
    TimedSolve r{solve(obs, cfg), 0.0};
    r.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

int finish(const SolverReport& rep) { return rep.termination == "converged" ? kExitOk : kExitMaxIters; }

int cmd_synth(const CommonOpts& o, int n1, int n2, int n3)
{
    echo_config("synth", o);
    SynthSpec spec{n1, n2, n3, o.rank, o.sample_rate, o.seed};
    Tensor3 m = gen_synthetic(spec);
    Observation obs = sample_uniform(m, o.sample_rate, o.seed + 1);
    SolverConfig cfg = make_config(o);
    cfg.seed = o.seed + 2;
    TimedSolve r = run_solver(obs, cfg);
    if (!o.out.empty()) save_tensor(r.report.recovered, o.out);
    std::cout << "metrics: relerr=" << relerr(r.report.recovered, m)
              << " psnr=" << psnr(r.report.recovered, m)
              << " iterations=" << r.report.iterations << " time=" << r.seconds
              << " termination=" << r.report.termination
              << " final_ranks=" << ranks_to_string(r.report.final_ranks) << "\n";
    return finish(r.report);
}

int cmd_complete(const CommonOpts& o, const std::string& tensor_path,
                 const std::string& mask_path)
{
    echo_config("complete", o);
    Tensor3 data = load_tensor(tensor_path);
    MaskFile mf = load_mask(mask_path);
    if (mf.n1 != data.n1() || mf.n2 != data.n2() || mf.n3 != data.n3())
        throw FormatError(mask_path + ": mask dims do not match the tensor");
    Observation obs(std::move(data), std::move(mf.mask));
    TimedSolve r = run_solver(obs, make_config(o));
    if (!o.out.empty()) save_tensor(r.report.recovered, o.out);
    std::cout << "metrics: iterations=" << r.report.iterations << " time=" << r.seconds
              << " termination=" << r.report.termination
              << " final_ranks=" << ranks_to_string(r.report.final_ranks) << "\n";
    return finish(r.report);
}

int cmd_phase(const CommonOpts& o, int n, int n3, const std::vector<int>& ranks,
              const std::vector<double>& rates, int trials)
{
    echo_config("phase", o);
    SolverConfig cfg = make_config(o);
    SweepResult res = phase_sweep(n, n3, ranks, rates, trials, cfg, o.seed);
    if (!o.out.empty()) {
        std::ofstream os(o.out);
        if (!os) throw FormatError(o.out + ": cannot open for writing");
        write_sweep_csv(res, os);
    } else {
        write_sweep_csv(res, std::cout);
    }
    int successes = 0;
    for (const SweepCell& c : res.cells) successes += c.success;
    std::cout << "metrics: cells=" << res.cells.size() << " successes=" << successes
              << "\n";
    return kExitOk;
}

int cmd_image(const CommonOpts& o, const std::string& input, const std::string& sampled_out)
{
    echo_config("image", o);
    cv::Mat bgr = cv::imread(input, cv::IMREAD_COLOR);
    if (bgr.empty()) throw FormatError(input + ": cannot decode image");
    cv::Mat rgb;
    cv::cvtColor(bgr, rgb, cv::COLOR_BGR2RGB);
    std::vector<uint8_t> buf(rgb.data, rgb.data + size_t(rgb.total()) * 3);
    Tensor3 truth = image_to_tensor(buf, rgb.rows, rgb.cols);

    Observation obs = sample_uniform(truth, o.sample_rate, o.seed + 1);
    if (!sampled_out.empty()) {
        Tensor3 shown = obs.data;
        std::vector<uint8_t> srgb = tensor_to_image(shown);
        cv::Mat m(rgb.rows, rgb.cols, CV_8UC3, srgb.data());
        cv::Mat out_bgr;
        cv::cvtColor(m, out_bgr, cv::COLOR_RGB2BGR);
        if (!cv::imwrite(sampled_out, out_bgr))
            throw FormatError(sampled_out + ": cannot write image");
    }

    SolverConfig cfg = make_config(o);
    cfg.seed = o.seed + 2;
    TimedSolve r = run_solver(obs, cfg);
    if (!o.out.empty()) {
        std::vector<uint8_t> out_rgb = tensor_to_image(r.report.recovered);
        cv::Mat m(rgb.rows, rgb.cols, CV_8UC3, out_rgb.data());
        cv::Mat out_bgr;
        cv::cvtColor(m, out_bgr, cv::COLOR_RGB2BGR);
        if (!cv::imwrite(o.out, out_bgr))
            throw FormatError(o.out + ": cannot write image");
    }
    std::cout << "metrics: relerr=" << relerr(r.report.recovered, truth)
              << " psnr=" << psnr(r.report.recovered, truth)
              << " iterations=" << r.report.iterations << " time=" << r.seconds
              << " termination=" << r.report.termination << "\n";
    return finish(r.report);
}

int cmd_bench(const CommonOpts& o, const std::vector<int>& sizes, int rank, int reps)
{
    echo_config("bench", o);
    SurrogateSpec g = make_surrogate(o);
    Rng rng(o.seed);
    std::ostringstream csv;
    csv << "n,rank,factored_seconds,full_seconds\n";
    for (int n : sizes) {
        Tensor3 a(n, rank, 3), b(rank, n, 3), y(n, n, 3);
        for (size_t i = 0; i < a.size(); ++i) a.data()[i] = rng.gaussian();
        for (size_t i = 0; i < b.size(); ++i) b.data()[i] = rng.gaussian();
        for (size_t i = 0; i < y.size(); ++i) y.data()[i] = rng.gaussian();

        auto best = [&](auto fn) {
            double t = std::numeric_limits<double>::infinity();
            for (int r = 0; r < reps; ++r) {
                auto t0 = std::chrono::steady_clock::now();
                fn();
                t = std::min(t, std::chrono::duration<double>(
                                    std::chrono::steady_clock::now() - t0)
                                    .count());
            }
            return t;
        };
        double tf = best([&] { gtsvt_factored(a, b, 0.1, g); });
        double tu = best([&] { gtsvt_full(y, 0.1, g); });
        csv << n << ',' << rank << ',' << tf << ',' << tu << '\n';
        std::cout << "bench: n=" << n << " rank=" << rank << " factored=" << tf
                  << " full=" << tu << "\n";
    }
    if (!o.out.empty()) {
        std::ofstream os(o.out);
        if (!os) throw FormatError(o.out + ": cannot open for writing");
        os << csv.str();
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"third-order tensor completion toolkit"};
    app.require_subcommand(1);
    std::cout.precision(10);

    CommonOpts o;

    int n1 = 200, n2 = 200, n3 = 3;
    CLI::App* synth = app.add_subcommand("synth", "generate, complete, report");
    synth->add_option("--n1", n1);
    synth->add_option("--n2", n2);
    synth->add_option("--n3", n3);
    synth->add_option("--rank", o.rank, "tubal rank of the ground truth");
    synth->add_option("--sample-rate", o.sample_rate)->check(CLI::Range(1e-9, 1.0));
    synth->add_option("--out", o.out, "recovered tensor output (TNS3)");
    add_solver_flags(synth, o);

    std::string tensor_path, mask_path;
    CLI::App* complete = app.add_subcommand("complete", "complete a tensor from a mask");
    complete->add_option("--input", tensor_path, "observed tensor (TNS3)")->required();
    complete->add_option("--mask", mask_path, "observation mask (MSK3)")->required();
    complete->add_option("--out", o.out, "recovered tensor output (TNS3)");
    add_solver_flags(complete, o);

    int phase_n = 100, phase_n3 = 3, trials = 3;
    std::vector<int> rank_grid = {5, 10, 20};
    std::vector<double> rate_grid = {0.2, 0.4, 0.6};
    CLI::App* phase = app.add_subcommand("phase", "phase-transition sweep to CSV");
    phase->add_option("--n", phase_n);
    phase->add_option("--n3", phase_n3);
    phase->add_option("--ranks", rank_grid, "rank grid");
    phase->add_option("--rates", rate_grid, "sampling-rate grid");
    phase->add_option("--trials", trials);
    phase->add_option("--out", o.out, "CSV output path (stdout if omitted)");
    add_solver_flags(phase, o);

    std::string image_path, sampled_out;
    CLI::App* image = app.add_subcommand("image", "inpaint a sampled RGB image");
    image->add_option("--input", image_path, "input raster")->required();
    image->add_option("--sample-rate", o.sample_rate)->check(CLI::Range(1e-9, 1.0));
    image->add_option("--sampled-out", sampled_out, "write the sampled image");
    image->add_option("--out", o.out, "recovered image output");
    add_solver_flags(image, o);

    std::vector<int> bench_sizes = {100, 200, 400};
    int bench_rank = 20, bench_reps = 3;
    CLI::App* bench = app.add_subcommand("bench", "time the thresholding kernels");
    bench->add_option("--sizes", bench_sizes);
    bench->add_option("--rank", bench_rank);
    bench->add_option("--reps", bench_reps);
    bench->add_option("--out", o.out, "CSV output path");
    add_solver_flags(bench, o);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*synth) return cmd_synth(o, n1, n2, n3);
        if (*complete) return cmd_complete(o, tensor_path, mask_path);
        if (*phase) return cmd_phase(o, phase_n, phase_n3, rank_grid, rate_grid, trials);
        if (*image) return cmd_image(o, image_path, sampled_out);
        if (*bench) return cmd_bench(o, bench_sizes, bench_rank, bench_reps);
    } catch (const FormatError& e) {
        std::cerr << "format error: " << e.what() << "\n";
        return kExitFormat;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitOk;
}
