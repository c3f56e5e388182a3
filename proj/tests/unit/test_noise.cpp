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

#include "qcfold/noise.hpp"
#include "qcfold/vqa.hpp"

namespace qcfold {
namespace {

SampleSet zeros(std::size_t n, std::uint64_t shots) {
    std::map<Bitstring, std::uint64_t> counts{{Bitstring(n, 0), shots}};
    return SampleSet::from_counts(n, counts);
}

TEST(Noise, ZeroRatesIdentity) {
    std::map<Bitstring, std::uint64_t> counts{{bits_from_string("01"), 4}, {bits_from_string("11"), 3}};
    auto s = SampleSet::from_counts(2, counts);
    EXPECT_EQ(apply_noise(s, ReadoutNoise{}, 1), s);
}

TEST(Noise, CertainFlip) {
    ReadoutNoise n;
    n.global.p01 = 1.0;
    auto out = apply_noise(zeros(3, 10), n, 1);
    ASSERT_EQ(out.distinct(), 1u);
    EXPECT_EQ(to_string(out.samples()[0].bits), "111");
    EXPECT_EQ(out.shots(), 10u);
}

TEST(Noise, BinomialWeight) {
    ReadoutNoise n;
    n.global.p01 = 0.08;
    const std::size_t q = 127;
    const std::uint64_t shots = 1u << 15;
    auto out = apply_noise(zeros(q, shots), n, 2);
    const double mean = q * 0.08;
    const double sigma = std::sqrt(q * 0.08 * 0.92 / static_cast<double>(shots));
    EXPECT_NEAR(out.mean_hamming_weight(), mean, 3 * sigma);
}

TEST(Noise, OverridesAndDirection) {
    ReadoutNoise n;
    n.overrides[1] = {0.0, 1.0};
    std::map<Bitstring, std::uint64_t> counts{{bits_from_string("11"), 5}};
    auto out = apply_noise(SampleSet::from_counts(2, counts), n, 3);
    EXPECT_EQ(to_string(out.samples()[0].bits), "10");
}

TEST(Noise, Validation) {
    ReadoutNoise n;
    n.global.p10 = 1.5;
    EXPECT_THROW(n.validate(), Error);
    EXPECT_THROW(apply_noise(zeros(1, 1), n, 0), Error);
}

TEST(Noise, Deterministic) {
    ReadoutNoise n;
    n.global = {0.1, 0.2};
    EXPECT_EQ(apply_noise(zeros(8, 1000), n, 5), apply_noise(zeros(8, 1000), n, 5));
}

TEST(Noise, SamplerWrapsInner) {
    AnsatzParams p(4, 1);
    MpsSampler<> inner;
    ReadoutNoise n;
    n.global.p01 = 1.0;
    NoisySampler noisy(inner, n);
    auto s = noisy.sample(p, 50, 1);
    EXPECT_EQ(to_string(s.samples()[0].bits), "1111");
}

}  // namespace
}  // namespace qcfold
