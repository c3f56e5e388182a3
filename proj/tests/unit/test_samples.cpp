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

#include "qcfold/samples.hpp"
#include "support/generators.hpp"

namespace qcfold {
namespace {

using Weighted = std::vector<std::pair<double, std::uint64_t>>;

TEST(Cvar, LowestFifth) { EXPECT_DOUBLE_EQ(cvar(Weighted{{5, 1}, {3, 1}, {1, 1}, {4, 1}, {2, 1}}, 0.2), 1.0); }

TEST(Cvar, AlphaOneIsMean) { EXPECT_DOUBLE_EQ(cvar(Weighted{{1, 1}, {2, 1}, {3, 1}, {4, 1}, {5, 1}}, 1.0), 3.0); }

TEST(Cvar, TwoLowest) { EXPECT_DOUBLE_EQ(cvar(Weighted{{1, 1}, {2, 1}, {3, 1}, {4, 1}, {5, 1}}, 0.4), 1.5); }

TEST(Cvar, MultiplicityIsSplit) {
    // 10 shots, k = 3: two copies of -2 and one of 0.
    EXPECT_DOUBLE_EQ(cvar(Weighted{{0.0, 4}, {-2.0, 2}, {7.0, 4}}, 0.3), -4.0 / 3.0);
}

TEST(Cvar, SmallAlphaKeepsOneShot) { EXPECT_DOUBLE_EQ(cvar(Weighted{{3, 1}, {9, 1}}, 0.01), 3.0); }

TEST(Cvar, Errors) {
    try {
        cvar(Weighted{{1, 1}}, 0.0);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::BadAlpha);
    }
    EXPECT_THROW(cvar(Weighted{{1, 1}}, 1.5), Error);
    try {
        cvar(Weighted{}, 0.5);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::EmptySampleSet);
    }
}

TEST(Cvar, PropertyMatchesExpandedSort) {
    testing::Rng rng(31);
    for (int trial = 0; trial < 200; ++trial) {
        Weighted w;
        std::vector<double> flat;
        const std::size_t distinct = 1 + rng() % 20;
        for (std::size_t k = 0; k < distinct; ++k) {
            const double e = std::round(testing::uniform(rng, -10, 10));
            const std::uint64_t c = 1 + rng() % 5;
            w.emplace_back(e, c);
            flat.insert(flat.end(), c, e);
        }
        const double alpha = testing::uniform(rng, 0.01, 1.0);
        std::sort(flat.begin(), flat.end());
        std::size_t k = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(alpha * flat.size() + 1e-9)));
        double acc = 0;
        for (std::size_t i = 0; i < k; ++i) {
            acc += flat[i];
        }
        EXPECT_NEAR(cvar(w, alpha), acc / k, 1e-12);
        // Monotone in alpha.
        EXPECT_LE(cvar(w, alpha / 2), cvar(w, alpha) + 1e-12);
    }
}

TEST(SampleSetTest, MergesAndSorts) {
    std::vector<Bitstring> shots{bits_from_string("10"), bits_from_string("01"), bits_from_string("10")};
    auto s = SampleSet::from_shots(2, shots);
    ASSERT_EQ(s.distinct(), 2u);
    EXPECT_EQ(to_string(s.samples()[0].bits), "01");
    EXPECT_EQ(s.samples()[1].count, 2u);
    EXPECT_EQ(s.shots(), 3u);
    EXPECT_NEAR(s.mean_hamming_weight(), 1.0, 1e-15);
    auto z = s.z_expectations();
    EXPECT_NEAR(z[0], -1.0 / 3.0, 1e-15);
}

TEST(SampleSetTest, UnscoredAccessIsAnError) {
    auto s = SampleSet::from_shots(1, std::vector<Bitstring>{bits_from_string("1")});
    EXPECT_THROW(s.best(), Error);
    s.score(IsingHamiltonian({2.0}, std::span<const Coupling>{}, 0.0));
    EXPECT_DOUBLE_EQ(s.best().energy, -2.0);
    EXPECT_DOUBLE_EQ(cvar(s, 1.0), -2.0);
}

TEST(SampleSetTest, WrongWidthRejected) {
    std::map<Bitstring, std::uint64_t> counts{{bits_from_string("1"), 1}};
    EXPECT_THROW(SampleSet::from_counts(2, counts), Error);
}

}  // namespace
}  // namespace qcfold
