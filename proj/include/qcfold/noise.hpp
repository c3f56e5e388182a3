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

#pragma once

#include <map>
#include <random>

#include "qcfold/samples.hpp"

namespace qcfold {

/// Independent asymmetric readout flips.
struct ReadoutNoise {
    struct Rates {
        double p01 = 0.0;  ///< read 0 as 1
        double p10 = 0.0;  ///< read 1 as 0
    };

    Rates global;
    std::map<std::size_t, Rates> overrides;

    Rates rates(std::size_t qubit) const {
        auto it = overrides.find(qubit);
        return it == overrides.end() ? global : it->second;
    }

    bool is_zero() const {
        if (global.p01 != 0.0 || global.p10 != 0.0) {
            return false;
        }
        for (const auto &[q, r] : overrides) {
            if (r.p01 != 0.0 || r.p10 != 0.0) {
                return false;
            }
        }
        return true;
    }

    void validate() const {
        auto check = [](const Rates &r) {
            if (!(r.p01 >= 0.0 && r.p01 <= 1.0 && r.p10 >= 0.0 && r.p10 <= 1.0)) {
                throw Error(ErrorKind::InvalidArgument, "readout flip probabilities must lie in [0, 1]");
            }
        };
        check(global);
        for (const auto &[q, r] : overrides) {
            check(r);
        }
    }
};

/// Expands every entry into shots, flips each bit with its direction-dependent
/// probability and re-merges. Shot count is preserved.
inline SampleSet apply_noise(const SampleSet &samples, const ReadoutNoise &noise, std::uint64_t seed) {
    noise.validate();
    if (noise.is_zero()) {
        return samples.transformed([](const Bitstring &b) { return b; });
    }
    const std::size_t n = samples.n_qubits();
    std::vector<ReadoutNoise::Rates> rates(n);
    for (std::size_t q = 0; q < n; ++q) {
        rates[q] = noise.rates(q);
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::map<Bitstring, std::uint64_t> counts;
    Bitstring shot(n);
    for (const auto &s : samples.samples()) {
        for (std::uint64_t c = 0; c < s.count; ++c) {
            for (std::size_t q = 0; q < n; ++q) {
                const double p = s.bits[q] ? rates[q].p10 : rates[q].p01;
                shot[q] = (p > 0.0 && unif(rng) < p) ? static_cast<std::uint8_t>(s.bits[q] ^ 1u) : s.bits[q];
            }
            ++counts[shot];
        }
    }
    return SampleSet::from_counts(n, std::move(counts));
}

}  // namespace qcfold
