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

#include <algorithm>
#include <numeric>
#include <random>

#include "qcfold/samples.hpp"

namespace qcfold {

/// Energy change from flipping bit j of x.
inline double flip_delta(const IsingHamiltonian &H, std::span<const std::uint8_t> x, std::size_t j) {
    double field = H.linear()[j];
    for (const auto &nb : H.neighbors(j)) {
        field += nb.value * spin(x[nb.index]);
    }
    return -2.0 * spin(x[j]) * field;
}

/// One pass of single-bit trial flips over a uniformly random permutation of
/// the indices. A flip is kept only when it strictly lowers the energy; the
/// next trial starts from the accepted string.
inline Bitstring local_search(Bitstring x, const IsingHamiltonian &H, std::uint64_t seed) {
    if (x.size() != H.size()) {
        throw Error(ErrorKind::LengthMismatch, "bitstring length does not match Hamiltonian size");
    }
    std::vector<std::size_t> order(x.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
    // Deltas smaller than this are rounding noise, not improvements.
    const double tol = 1e-12 * (1.0 + H.coefficient_l1());
    for (auto j : order) {
        if (flip_delta(H, x, j) < -tol) {
            x[j] ^= 1u;
        }
    }
    return x;
}

/// Runs `local_search` on every distinct bitstring (seed derived from the
/// entry index) and returns the refined, re-merged and scored sample set.
inline SampleSet local_search_samples(const SampleSet &samples, const IsingHamiltonian &H, std::uint64_t seed) {
    std::map<Bitstring, std::uint64_t> counts;
    const auto &entries = samples.samples();
    for (std::size_t k = 0; k < entries.size(); ++k) {
        counts[local_search(entries[k].bits, H, derive_seed(seed, k))] += entries[k].count;
    }
    auto out = SampleSet::from_counts(samples.n_qubits(), std::move(counts));
    out.score(H);
    return out;
}

}  // namespace qcfold
