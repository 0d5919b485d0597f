#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "tcdlr/harness.hpp"
#include "tcdlr/io.hpp"
#include "tcdlr/sweep.hpp"
#include "tcdlr/tsvd.hpp"
#include "test_util.hpp"

using namespace tcdlr;

namespace fs = std::filesystem;

namespace {
struct TempDir {
    fs::path path;
    TempDir() : path(fs::temp_directory_path() / ("tcdlr_test_" + std::to_string(::getpid())))
    {
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};
}  // namespace

TEST(GenSynthetic, RankAndDeterminism)
{
    SynthSpec spec{50, 50, 3, 5, 0.3, 123};
    Tensor3 m = gen_synthetic(spec);
    EXPECT_EQ(tubal_rank(m, 1e-8), 5);

    Tensor3 m2 = gen_synthetic(spec);
    EXPECT_EQ(0.0, test::max_abs_diff(m, m2));

    SynthSpec full{10, 12, 3, 10, 0.3, 7};
    EXPECT_EQ(tubal_rank(gen_synthetic(full), 1e-8), 10);

    SynthSpec bad{10, 10, 3, 11, 0.3, 7};
    EXPECT_THROW(gen_synthetic(bad), std::invalid_argument);
}

TEST(SampleUniform, CountsAndFullRate)
{
    Rng rng(1);
    Tensor3 m = test::random_tensor(10, 10, 3, rng);

    Observation full = sample_uniform(m, 1.0, 0);
    for (uint8_t b : full.mask) EXPECT_EQ(b, 1);

    Observation obs = sample_uniform(m, 0.3, 1);
    size_t count = 0;
    for (size_t i = 0; i < obs.mask.size(); ++i) {
        if (obs.mask[i]) {
            ++count;
            EXPECT_EQ(obs.data.data()[i], m.data()[i]);
        } else {
            EXPECT_EQ(obs.data.data()[i], 0.0);
        }
    }
    EXPECT_EQ(count, 90u);

    EXPECT_THROW(sample_uniform(m, 0.0, 0), std::invalid_argument);
    EXPECT_THROW(sample_uniform(m, 1.5, 0), std::invalid_argument);
}

TEST(SampleUniform, PerSliceFractionIsBinomial)
{
    Rng rng(2);
    Tensor3 m = test::random_tensor(20, 20, 3, rng);
    const double c = 0.3;
    const int per_slice = 20 * 20;
    // mean count per slice is c*400 = 120, sd = sqrt(400*c*(1-c)) ~ 9.2;
    // averaged over 100 seeds the slice means must fall within 3 sigma of the
    // seed-averaged distribution
    double sum[3] = {0, 0, 0};
    const int seeds = 100;
    for (int s = 0; s < seeds; ++s) {
        Observation obs = sample_uniform(m, c, 1000 + s);
        for (int k = 0; k < 3; ++k) {
            int cnt = 0;
            for (int i = 0; i < per_slice; ++i) cnt += obs.mask[size_t(k) * per_slice + i];
            sum[k] += cnt;
        }
    }
    double sd_mean = std::sqrt(per_slice * c * (1 - c) / seeds);
    for (int k = 0; k < 3; ++k)
        EXPECT_NEAR(sum[k] / seeds, c * per_slice, 3.0 * sd_mean) << "slice " << k;
}

TEST(Metrics, RelerrAndPsnr)
{
    Rng rng(3);
    Tensor3 m = test::random_tensor(6, 5, 3, rng);
    EXPECT_EQ(relerr(m, m), 0.0);
    EXPECT_TRUE(std::isinf(psnr(m, m)));

    Tensor3 twice = 2.0 * m;
    EXPECT_NEAR(relerr(twice, m), 1.0, 1e-12);

    Tensor3 ones(10, 10, 3);
    for (size_t i = 0; i < ones.size(); ++i) ones.data()[i] = 1.0;
    Tensor3 off = ones;
    for (size_t i = 0; i < off.size(); ++i) off.data()[i] += 0.1;
    EXPECT_NEAR(psnr(off, ones), 20.0, 1e-10);

    Tensor3 zero(6, 5, 3);
    EXPECT_THROW(relerr(m, zero), std::invalid_argument);
    EXPECT_THROW(psnr(m, zero), std::invalid_argument);
    EXPECT_THROW(relerr(m, test::random_tensor(5, 5, 3, rng)), std::invalid_argument);
}

TEST(TensorIo, RoundTripIsBitwise)
{
    TempDir dir;
    Rng rng(4);
    Tensor3 t = test::random_tensor(4, 3, 2, rng);
    save_tensor(t, dir.file("t.tns3"));
    Tensor3 back = load_tensor(dir.file("t.tns3"));
    ASSERT_TRUE(back.same_dims(t));
    for (size_t i = 0; i < t.size(); ++i) EXPECT_EQ(back.data()[i], t.data()[i]);
}

TEST(TensorIo, StructuredErrors)
{
    TempDir dir;
    Rng rng(5);
    Tensor3 t = test::random_tensor(4, 3, 2, rng);
    std::string path = dir.file("t.tns3");
    save_tensor(t, path);

    // truncate the payload
    fs::resize_file(path, fs::file_size(path) - 8);
    EXPECT_THROW(load_tensor(path), FormatError);

    // header dims larger than the payload
    save_tensor(t, path);
    {
        std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
        uint32_t big = 400;
        f.seekp(4);
        f.write(reinterpret_cast<const char*>(&big), 4);
    }
    EXPECT_THROW(load_tensor(path), FormatError);

    // wrong magic
    {
        std::ofstream f(dir.file("bad.tns3"), std::ios::binary);
        f << "NOPE1234";
    }
    EXPECT_THROW(load_tensor(dir.file("bad.tns3")), FormatError);
    EXPECT_THROW(load_tensor(dir.file("missing.tns3")), FormatError);
}

TEST(MaskIo, RoundTripAndValidation)
{
    TempDir dir;
    std::vector<uint8_t> mask = {1, 0, 1, 1, 0, 0, 1, 0, 1, 0, 1, 1};
    save_mask(mask, 2, 3, 2, dir.file("m.msk3"));
    MaskFile back = load_mask(dir.file("m.msk3"));
    EXPECT_EQ(back.n1, 2);
    EXPECT_EQ(back.n2, 3);
    EXPECT_EQ(back.n3, 2);
    EXPECT_EQ(back.mask, mask);

    std::vector<uint8_t> bad = mask;
    bad[3] = 7;
    save_mask(bad, 2, 3, 2, dir.file("bad.msk3"));
    EXPECT_THROW(load_mask(dir.file("bad.msk3")), FormatError);
}

TEST(Image, MidGrayAndRoundTrip)
{
    std::vector<uint8_t> gray(6 * 4 * 3, 128);
    Tensor3 t = image_to_tensor(gray, 6, 4);
    for (size_t i = 0; i < t.size(); ++i) EXPECT_NEAR(t.data()[i], 128.0 / 255.0, 1e-12);

    Rng rng(6);
    std::vector<uint8_t> img(8 * 5 * 3);
    for (auto& b : img) b = uint8_t(rng.integer(256));
    EXPECT_EQ(tensor_to_image(image_to_tensor(img, 8, 5)), img);
}

TEST(Image, ClampsOutOfRange)
{
    Tensor3 t(1, 1, 3);
    t(0, 0, 0) = -0.5;
    t(0, 0, 1) = 0.5;
    t(0, 0, 2) = 1.5;
    auto rgb = tensor_to_image(t);
    EXPECT_EQ(rgb[0], 0);
    EXPECT_EQ(rgb[1], 128);
    EXPECT_EQ(rgb[2], 255);
}

TEST(PhaseSweep, SmallGridBehaves)
{
    SolverConfig cfg;
    cfg.surrogate = SurrogateSpec::lp(0.8);
    cfg.k_min = 2;
    cfg.k_max = 15;
    cfg.l = 1;
    cfg.max_iters = 250;
    SweepResult res = phase_sweep(30, 3, {3}, {0.2, 0.6, 1.0}, 2, cfg, 5);
    ASSERT_EQ(res.cells.size(), 3u);
    // fully observed column always succeeds; success is monotone in the rate
    EXPECT_TRUE(res.cells[2].success);
    EXPECT_GE(res.cells[2].success_count, res.cells[1].success_count);

    std::ostringstream os;
    write_sweep_csv(res, os);
    std::string csv = os.str();
    EXPECT_NE(csv.find("rank_fraction,sample_rate,mean_relerr,success_count,mean_time"),
              std::string::npos);
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);

    EXPECT_THROW(phase_sweep(30, 3, {}, {0.5}, 1, cfg), std::invalid_argument);
}
