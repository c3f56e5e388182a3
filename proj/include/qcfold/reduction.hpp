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

#include <limits>
#include <tuple>
#include <vector>

#include "qcfold/qubo.hpp"

namespace qcfold {

/// Variables whose every quadratic coefficient is nonnegative ("kappa") are
/// eliminated; they can only raise the objective through their couplings and
/// are re-solved after the reduced problem.
struct ReductionResult {
    QuboProblem reduced;
    std::vector<std::size_t> kappa;     ///< eliminated original indices, ascending
    std::vector<std::size_t> back_map;  ///< reduced index -> original index
};

inline constexpr std::size_t kMaxKappaEnumerationBits = 20;

inline std::vector<std::size_t> kappa_set(const QuboProblem &q) {
    std::vector<std::uint8_t> has_negative(q.n_vars(), 0);
    for (const auto &[key, value] : q.quadratic()) {
        if (value < 0.0) {
            has_negative[key.first] = 1;
            has_negative[key.second] = 1;
        }
    }
    std::vector<std::size_t> kappa;
    for (std::size_t v = 0; v < q.n_vars(); ++v) {
        if (!has_negative[v]) {
            kappa.push_back(v);
        }
    }
    return kappa;
}

inline ReductionResult reduce_qubo(const QuboProblem &q) {
    ReductionResult res;
    res.kappa = kappa_set(q);
    std::vector<std::size_t> forward(q.n_vars(), std::numeric_limits<std::size_t>::max());
    std::size_t k = 0;
    for (std::size_t v = 0; v < q.n_vars(); ++v) {
        if (k < res.kappa.size() && res.kappa[k] == v) {
            ++k;
            continue;
        }
        forward[v] = res.back_map.size();
        res.back_map.push_back(v);
    }
    res.reduced = QuboProblem(res.back_map.size());
    for (std::size_t r = 0; r < res.back_map.size(); ++r) {
        res.reduced.add_linear(r, q.linear()[res.back_map[r]]);
    }
    for (const auto &[key, value] : q.quadratic()) {
        auto a = forward[key.first];
        auto b = forward[key.second];
        if (a != std::numeric_limits<std::size_t>::max() && b != std::numeric_limits<std::size_t>::max()) {
            res.reduced.add_quadratic(a, b, value);
        }
    }
    res.reduced.r = q.r;
    res.reduced.p = q.p;
    res.reduced.t = q.t;
    for (auto v : res.back_map) {
        if (v < q.quartets.size()) {
            res.reduced.quartets.push_back(q.quartets[v]);
        }
    }
    return res;
}

/// Lifts a reduced solution back to the original variables. Kappa variables
/// coupled to a selected reduced variable are forced to 0; the rest that have
/// a negative linear coefficient are solved exactly over the kappa-internal
/// sub-QUBO (others stay 0, since none of their terms can be negative).
inline Bitstring recombine_solution(const ReductionResult &res, std::span<const std::uint8_t> x_red,
                                    const QuboProblem &original) {
    if (x_red.size() != res.reduced.n_vars()) {
        throw Error(ErrorKind::LengthMismatch, "reduced solution length does not match reduced problem");
    }
    const std::size_t n = original.n_vars();
    Bitstring x(n, 0);
    std::vector<std::uint8_t> in_kappa(n, 0);
    for (auto v : res.kappa) {
        in_kappa[v] = 1;
    }
    for (std::size_t r = 0; r < x_red.size(); ++r) {
        x[res.back_map[r]] = x_red[r];
    }
    if (res.kappa.empty()) {
        return x;
    }

    std::vector<std::uint8_t> forced_zero(n, 0);
    for (const auto &[key, value] : original.quadratic()) {
        if (value == 0.0) {
            continue;
        }
        auto [a, b] = key;
        if (in_kappa[a] && !in_kappa[b] && x[b]) {
            forced_zero[a] = 1;
        }
        if (in_kappa[b] && !in_kappa[a] && x[a]) {
            forced_zero[b] = 1;
        }
    }

    std::vector<std::size_t> free_vars;
    for (auto v : res.kappa) {
        if (!forced_zero[v] && original.linear()[v] < 0.0) {
            free_vars.push_back(v);
        }
    }
    if (free_vars.empty()) {
        return x;
    }
    if (free_vars.size() > kMaxKappaEnumerationBits) {
        throw Error(ErrorKind::KappaTooLarge, "kappa sub-problem has " + std::to_string(free_vars.size()) +
                                                  " free variables, enumeration cap is " +
                                                  std::to_string(kMaxKappaEnumerationBits));
    }

    const std::size_t m = free_vars.size();
    std::vector<std::size_t> local(n, m);
    for (std::size_t k = 0; k < m; ++k) {
        local[free_vars[k]] = k;
    }
    std::vector<double> h(m);
    for (std::size_t k = 0; k < m; ++k) {
        h[k] = original.linear()[free_vars[k]];
    }
    std::vector<std::tuple<std::size_t, std::size_t, double>> J;
    for (const auto &[key, value] : original.quadratic()) {
        if (local[key.first] < m && local[key.second] < m) {
            J.emplace_back(local[key.first], local[key.second], value);
        }
    }

    // Enumerate in lexicographic order (first free variable most significant);
    // strict improvement keeps the smallest assignment among ties.
    double best = std::numeric_limits<double>::infinity();
    std::uint64_t best_code = 0;
    std::vector<std::uint8_t> y(m);
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << m); ++code) {
        for (std::size_t k = 0; k < m; ++k) {
            y[k] = static_cast<std::uint8_t>((code >> (m - 1 - k)) & 1u);
        }
        double value = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            if (y[k]) {
                value += h[k];
            }
        }
        for (const auto &[a, b, w] : J) {
            if (y[a] && y[b]) {
                value += w;
            }
        }
        if (value < best) {
            best = value;
            best_code = code;
        }
    }
    for (std::size_t k = 0; k < m; ++k) {
        x[free_vars[k]] = static_cast<std::uint8_t>((best_code >> (m - 1 - k)) & 1u);
    }
    return x;
}

}  // namespace qcfold
