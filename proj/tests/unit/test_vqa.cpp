// Copyright 2026 The qcfold Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <numbers>

#include "qcfold/vqa.hpp"
#include "support/generators.hpp"

namespace qcfold {
namespace {

TEST(InitParams, CountOfRotatedQubits) {
    std::mt19937_64 rng(1);
    auto p = init_params(10, 2, 0.01, rng);
    EXPECT_EQ(std::count(p.theta.begin(), p.theta.end(), std::numbers::pi / 4), 1);
    auto q = init_params(127, 2, 0.07, rng);
    EXPECT_EQ(std::count(q.theta.begin(), q.theta.end(), std::numbers::pi / 4), 9);
    for (std::size_t k = 127; k < q.theta.size(); ++k) {
        EXPECT_EQ(q.theta[k], 0.0);
    }
    EXPECT_THROW(init_params(4, 1, 0.0, rng), Error);
}

TEST(InitParams, MeanHammingWeight) {
    std::mt19937_64 rng(2);
    const std::size_t n = 40;
    auto p = init_params(n, 2, 0.2, rng);
    const std::uint64_t shots = 1u << 15;
    MpsSampler<> sampler;
    auto s = sampler.sample(p, shots, 5);
    const double per_qubit = std::pow(std::sin(std::numbers::pi / 8), 2);
    const double expected = 8 * per_qubit;
    const double sigma = std::sqrt(8 * per_qubit * (1 - per_qubit) / static_cast<double>(shots));
    EXPECT_NEAR(s.mean_hamming_weight(), expected, 4 * sigma);
}

SampleSet column(std::size_t ones, std::size_t total) {
    std::map<Bitstring, std::uint64_t> counts;
    counts[bits_from_string("01")] = ones;
    counts[bits_from_string("00")] = total - ones;
    return SampleSet::from_counts(2, counts);
}

TEST(Gauge, NoiselessGivesIdentity) {
    auto H = IsingHamiltonian::zero(2);
    std::vector<std::size_t> zeros{0, 1};
    EXPECT_EQ(calibrate_gauge(H, column(0, 100), 0.8, zeros).count(), 0u);
}

TEST(Gauge, HeavilyFlippedQubitSelected) {
    auto H = IsingHamiltonian::zero(2);
    std::vector<std::size_t> zeros{0, 1};
    auto m = calibrate_gauge(H, column(95, 100), 0.8, zeros);
    EXPECT_EQ(to_string(m.bits()), "01");
}

TEST(Gauge, ThresholdIsStrict) {
    auto H = IsingHamiltonian::zero(2);
    std::vector<std::size_t> zeros{0, 1};
    EXPECT_EQ(calibrate_gauge(H, column(9, 10), 0.8, zeros).count(), 0u);
    // Qubits outside the expected-zero set are never flipped.
    std::vector<std::size_t> first{0};
    EXPECT_EQ(calibrate_gauge(H, column(100, 100), 0.8, first).count(), 0u);
}

TEST(Nft, ExactSinusoidMinimum) {
    for (double start : {-2.0, 0.0, 0.3, 1.5, 3.0}) {
        std::vector<double> theta{start, 0.7};
        auto f = [](const std::vector<double> &t) { return std::cos(t[0]); };
        auto step = nft_step(f, theta, 0);
        EXPECT_TRUE(step.updated);
        EXPECT_NEAR(std::abs(theta[0]), std::numbers::pi, 1e-12);
        EXPECT_NEAR(f(theta), -1.0, 1e-12);
        EXPECT_NEAR(step.predicted, -1.0, 1e-12);
        EXPECT_EQ(theta[1], 0.7);
    }
}

TEST(Nft, ConstantObjectiveUnchanged) {
    std::vector<double> theta{0.4};
    auto step = nft_step([](const std::vector<double> &) { return 2.5; }, theta, 0);
    EXPECT_FALSE(step.updated);
    EXPECT_EQ(theta[0], 0.4);
}

TEST(Nft, PropertyNonIncreasingOnSinusoids) {
    testing::Rng rng(50);
    for (int trial = 0; trial < 100; ++trial) {
        const double a = testing::uniform(rng, -2, 2), b = testing::uniform(rng, -2, 2), c = testing::uniform(rng, -1, 1);
        const double w = trial % 2 ? 1.0 : 2.0;
        auto f = [&](const std::vector<double> &t) { return a * std::cos(w * t[0]) + b * std::sin(w * t[0]) + c; };
        std::vector<double> theta{testing::uniform(rng, -3, 3)};
        const double before = f(theta);
        nft_step(f, theta, 0, w);
        EXPECT_LE(f(theta), before + 1e-12);
        EXPECT_NEAR(f(theta), c - std::hypot(a, b), 1e-10);
        EXPECT_GT(theta[0], -std::numbers::pi / w - 1e-12);
        EXPECT_LE(theta[0], std::numbers::pi / w + 1e-12);
    }
}

TEST(Nft, IndexChecked) {
    std::vector<double> theta{0.0};
    EXPECT_THROW(nft_step([](const std::vector<double> &) { return 0.0; }, theta, 1), Error);
}

TEST(Threshold, Cases) {
    std::vector<double> t{0.05, -0.07};
    threshold_params(t, 0.06);
    EXPECT_EQ(t, (std::vector<double>{0.0, -0.07}));
    std::vector<double> u{0.01, -0.02};
    threshold_params(u, 0.0);
    EXPECT_EQ(u, (std::vector<double>{0.01, -0.02}));
    std::vector<double> z(3, 0.0);
    threshold_params(z, 0.06);
    EXPECT_EQ(z, std::vector<double>(3, 0.0));
}

TEST(Metrics, RelativeError) {
    EXPECT_DOUBLE_EQ(relative_error_percent(-9.0, -10.0), 10.0);
    EXPECT_DOUBLE_EQ(relative_error_percent(0.0, 0.0), 0.0);
}

TEST(Config, Validation) {
    VqaConfig c;
    EXPECT_NO_THROW(c.validate());
    c.alpha = 0.0;
    try {
        c.validate();
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::BadAlpha);
    }
    c = {};
    c.layers = 5;
    EXPECT_THROW(c.validate(), Error);
}

VqaConfig small_config(std::uint64_t seed) {
    VqaConfig c;
    c.seed = seed;
    c.f = 0.2;
    return c;
}

// 18 of 20 runs per instance, averaged over ten random instances.
TEST(RunVqa, SixQubitHitRate) {
    int hits = 0;
    for (std::uint64_t inst = 0; inst < 10; ++inst) {
        testing::Rng rng(100 + inst);
        auto H = testing::random_ising(rng, 6, 0.6, true);
        const double ref = brute_force_solve(H).energy;
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            MpsSampler<> sampler;
            auto r = run_vqa(H, small_config(seed), sampler, ref);
            hits += r.hit.value();
            EXPECT_EQ(*r.hit, *r.gamma == 0.0);
            EXPECT_LE(r.best_energy, r.raw_best_energy);
            EXPECT_DOUBLE_EQ(energy(H, r.best_bitstring), r.best_energy);
        }
    }
    EXPECT_GE(hits, 180);
}

TEST(RunVqa, DeterministicTrace) {
    testing::Rng rng(61);
    auto H = testing::random_ising(rng, 7);
    MpsSampler<> s1, s2;
    auto a = run_vqa(H, small_config(9), s1);
    auto b = run_vqa(H, small_config(9), s2);
    ASSERT_EQ(a.trace.size(), b.trace.size());
    for (std::size_t k = 0; k < a.trace.size(); ++k) {
        EXPECT_EQ(a.trace[k].cvar, b.trace[k].cvar);
        EXPECT_EQ(a.trace[k].param_index, b.trace[k].param_index);
    }
    EXPECT_EQ(a.best_bitstring, b.best_bitstring);
    EXPECT_EQ(a.final_params, b.final_params);
}

TEST(RunVqa, IterationBudget) {
    testing::Rng rng(62);
    auto H = testing::random_ising(rng, 5);
    VqaConfig c = small_config(1);
    c.n_iter = 7;
    c.n_shots = 256;
    MpsSampler<> s;
    auto r = run_vqa(H, c, s);
    EXPECT_EQ(r.trace.size(), 8u);
    EXPECT_EQ(r.evaluations, 3 * 7 + 1u);
    c.n_iter = 0;
    c.epochs = 1;
    MpsSampler<> s2;
    EXPECT_EQ(run_vqa(H, c, s2).trace.size(), 1 + 3 * 5u);
}

TEST(RunVqa, LayerwiseRuns) {
    testing::Rng rng(63);
    auto H = testing::random_ising(rng, 6);
    VqaConfig c = small_config(2);
    c.layerwise = true;
    c.n_shots = 1024;
    MpsSampler<> s;
    auto r = run_vqa(H, c, s);
    EXPECT_EQ(r.trace.size(), 1 + 2 * 3 * 6u);
}

TEST(RunVqa, NoisyGaugeRecoversFrame) {
    // A qubit that always reads 1 gets gauged; reported energies stay in the original frame.
    testing::Rng rng(64);
    auto H = testing::random_ising(rng, 6);
    ReadoutNoise noise;
    noise.overrides[2] = {0.97, 0.0};
    MpsSampler<> inner;
    NoisySampler sampler(inner, noise);
    VqaConfig c = small_config(3);
    c.f = 0.1;
    c.n_shots = 4096;
    auto r = run_vqa(H, c, sampler);
    EXPECT_TRUE(r.gauge_mask.flipped(2));
    EXPECT_DOUBLE_EQ(energy(H, r.best_bitstring), r.best_energy);
    EXPECT_DOUBLE_EQ(energy(H, r.raw_best_bitstring), r.raw_best_energy);
}

}  // namespace
}  // namespace qcfold
