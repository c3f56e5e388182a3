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

#include <random>

#include "qcfold/qubo.hpp"

namespace qcfold {

struct GeneratedInstance {
    Sequence sequence;
    QuboProblem qubo;
    std::uint64_t seed = 0;
    std::size_t attempts = 0;
};

/// Random sequences are drawn (length uniform in [min_length, max_length])
/// until the quartet count lands in [min_vars, max_vars].
inline GeneratedInstance generate_mrna_instance(std::size_t min_vars, std::size_t max_vars, std::uint64_t seed,
                                                std::size_t min_length, std::size_t max_length,
                                                const StackEnergyTable &table = StackEnergyTable::nearest_neighbor_default(),
                                                const QuboCoefficients &coeffs = {},
                                                std::size_t min_loop = kDefaultMinLoop,
                                                std::size_t max_attempts = 100000) {
    if (min_vars == 0 || min_vars > max_vars || min_length < 2 || min_length > max_length) {
        throw Error(ErrorKind::InvalidArgument, "invalid instance generator ranges");
    }
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> length(min_length, max_length);
    for (std::size_t attempt = 1; attempt <= max_attempts; ++attempt) {
        auto seq = random_sequence(length(rng), rng);
        auto quartets = enumerate_quartets(seq, min_loop, table);
        if (quartets.size() >= min_vars && quartets.size() <= max_vars) {
            return {seq, assemble_qubo(quartets, coeffs), seed, attempt};
        }
    }
    throw Error(ErrorKind::InvalidArgument, "no sequence with the requested quartet count found");
}

/// Sequence lengths that typically yield the requested quartet counts.
inline GeneratedInstance generate_mrna_instance(std::size_t min_vars, std::size_t max_vars, std::uint64_t seed) {
    const std::size_t mid = (min_vars + max_vars) / 2;
    const std::size_t lo = std::max<std::size_t>(8, mid);
    return generate_mrna_instance(min_vars, max_vars, seed, lo, lo + 3 * mid + 8);
}

}  // namespace qcfold
