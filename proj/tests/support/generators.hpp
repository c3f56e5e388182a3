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
#include <vector>

#include "qcfold/ising.hpp"
#include "qcfold/mps.hpp"
#include "qcfold/qubo.hpp"

namespace qcfold::testing {

using Rng = std::mt19937_64;

inline double uniform(Rng &rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

inline std::size_t uniform_index(Rng &rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline Bitstring random_bits(Rng &rng, std::size_t n) {
    Bitstring b(n);
    for (auto &v : b) {
        v = static_cast<std::uint8_t>(rng() & 1u);
    }
    return b;
}

/// Dense-ish random Hamiltonian with coefficients in [-1, 1]; each pair is
/// coupled with probability `density`.
inline IsingHamiltonian random_ising(Rng &rng, std::size_t n, double density = 0.5, bool integer = false) {
    auto coef = [&] {
        return integer ? static_cast<double>(static_cast<int>(uniform_index(rng, 0, 8)) - 4) : uniform(rng, -1.0, 1.0);
    };
    std::vector<double> h(n);
    for (auto &v : h) {
        v = coef();
    }
    std::map<VarPair, double> J;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (uniform(rng, 0.0, 1.0) < density) {
                J[{i, j}] = coef();
            }
        }
    }
    return IsingHamiltonian(std::move(h), J, coef());
}

inline QuboProblem random_qubo(Rng &rng, std::size_t n, double density = 0.5) {
    QuboProblem q(n);
    for (std::size_t i = 0; i < n; ++i) {
        q.add_linear(i, uniform(rng, -2.0, 2.0));
        for (std::size_t j = i + 1; j < n; ++j) {
            if (uniform(rng, 0.0, 1.0) < density) {
                q.add_quadratic(i, j, uniform(rng, -2.0, 2.0));
            }
        }
    }
    q.add_offset(uniform(rng, -1.0, 1.0));
    return q;
}

inline AnsatzParams random_ansatz(Rng &rng, std::size_t n, std::size_t layers) {
    AnsatzParams p(n, layers);
    for (auto &t : p.theta) {
        t = uniform(rng, -3.2, 3.2);
    }
    return p;
}

/// Exhaustive minimum of a QUBO in its 0/1 form.
inline double qubo_minimum(const QuboProblem &q) {
    double best = std::numeric_limits<double>::infinity();
    const std::size_t n = q.n_vars();
    for (std::uint64_t k = 0; k < (std::uint64_t{1} << n); ++k) {
        best = std::min(best, q.value(bits_from_index(k, n)));
    }
    return best;
}

/// Random QUBO shaped like the structure problems: a block of "free"
/// variables with mixed couplings and a block of kappa candidates whose
/// couplings are all nonnegative penalties and whose linear terms are small.
inline QuboProblem random_reducible_qubo(Rng &rng, std::size_t n, std::size_t n_kappa) {
    QuboProblem q(n);
    const std::size_t first_kappa = n - n_kappa;
    for (std::size_t i = 0; i < n; ++i) {
        const bool kappa_i = i >= first_kappa;
        q.add_linear(i, kappa_i ? uniform(rng, -0.1, 0.1) : uniform(rng, -1.0, 0.5));
        for (std::size_t j = i + 1; j < n; ++j) {
            const bool kappa_pair = kappa_i || j >= first_kappa;
            if (uniform(rng, 0.0, 1.0) < 0.4) {
                q.add_quadratic(i, j, kappa_pair ? uniform(rng, 2.0, 5.0) : uniform(rng, -1.0, 3.0));
            }
        }
    }
    return q;
}

/// Checkable form of "|h| << |J| around kappa": every coupling incident to a
/// kappa variable outweighs that variable's linear term, the reduced optimum
/// is unique, and every other reduced assignment is worse by at least the
/// most the kappa block can gain.
inline bool reduction_premise_holds(const QuboProblem &original, const QuboProblem &reduced,
                                    std::span<const std::size_t> kappa) {
    std::vector<std::uint8_t> in_kappa(original.n_vars(), 0);
    double kappa_gain = 0.0;
    for (auto v : kappa) {
        in_kappa[v] = 1;
        kappa_gain += std::max(0.0, -original.linear()[v]);
    }
    for (const auto &[key, value] : original.quadratic()) {
        for (auto v : {key.first, key.second}) {
            if (in_kappa[v] && value > 0.0 && value <= std::abs(original.linear()[v])) {
                return false;
            }
        }
    }
    const std::size_t m = reduced.n_vars();
    double best = std::numeric_limits<double>::infinity(), second = best;
    for (std::uint64_t k = 0; k < (std::uint64_t{1} << m); ++k) {
        const double v = reduced.value(bits_from_index(k, m));
        if (v < best) {
            second = best;
            best = v;
        } else if (v < second) {
            second = v;
        }
    }
    return second - best > kappa_gain;
}

}  // namespace qcfold::testing
