#ifndef TCDLR_SWEEP_HPP
#define TCDLR_SWEEP_HPP

// Phase-transition sweep over (tubal rank, sampling rate) grids. A cell is a
// success when the mean relerr over its trials is <= 1e-2.

#include <chrono>
#include <ostream>
#include <vector>

#include "tcdlr/harness.hpp"

namespace tcdlr {

struct SweepCell {
    int rank = 0;
    double rank_fraction = 0.0;
    double sample_rate = 0.0;
    double mean_relerr = 0.0;
    int success_count = 0;
    double mean_time = 0.0;
    bool success = false;
};

struct SweepResult {
    std::vector<SweepCell> cells;  // rate-major: all rates for rank 0, then rank 1, ...
};

inline constexpr double kSweepSuccessThreshold = 1e-2;

inline SweepResult phase_sweep(int n, int n3, const std::vector<int>& rank_grid,
                               const std::vector<double>& rate_grid, int trials,
                               const SolverConfig& base_cfg, uint64_t seed0 = 0)
{
    if (rank_grid.empty() || rate_grid.empty() || trials < 1)
        throw std::invalid_argument("phase_sweep: empty grid");
    SweepResult out;
    for (int rank : rank_grid) {
        for (double rate : rate_grid) {
            SweepCell cell;
            cell.rank = rank;
            cell.rank_fraction = double(rank) / n;
            cell.sample_rate = rate;
            double relerr_sum = 0.0, time_sum = 0.0;
            for (int trial = 0; trial < trials; ++trial) {
                uint64_t seed = seed0 + uint64_t(trial) * 7919 + uint64_t(rank) * 104729 +
                                uint64_t(rate * 1e6);
                SynthSpec spec{n, n, n3, rank, rate, seed};
                Tensor3 m = gen_synthetic(spec);
                Observation obs = sample_uniform(m, rate, seed + 1);
                SolverConfig cfg = base_cfg;
                cfg.seed = seed + 2;
                if (cfg.k_init <= 0)
                    cfg.k_init = std::min(std::max(1, 3 * rank / 2), n);
                auto t0 = std::chrono::steady_clock::now();
                SolverReport rep = solve(obs, cfg);
                time_sum += std::chrono::duration<double>(
                                std::chrono::steady_clock::now() - t0)
                                .count();
                double err = relerr(rep.recovered, m);
                relerr_sum += err;
                if (err <= kSweepSuccessThreshold) ++cell.success_count;
            }
            cell.mean_relerr = relerr_sum / trials;
            cell.mean_time = time_sum / trials;
            cell.success = cell.mean_relerr <= kSweepSuccessThreshold;
            out.cells.push_back(cell);
        }
    }
    return out;
}

inline void write_sweep_csv(const SweepResult& res, std::ostream& os)
{
    os << "rank_fraction,sample_rate,mean_relerr,success_count,mean_time\n";
    os.precision(10);
    for (const SweepCell& c : res.cells)
        os << c.rank_fraction << ',' << c.sample_rate << ',' << c.mean_relerr << ','
           << c.success_count << ',' << c.mean_time << '\n';
}

}  // namespace tcdlr

#endif
