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
#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "qcfold/energy_table.hpp"
#include "qcfold/sequence.hpp"

namespace qcfold {

using VarPair = std::pair<std::size_t, std::size_t>;

inline VarPair ordered_pair(std::size_t a, std::size_t b) { return a < b ? VarPair{a, b} : VarPair{b, a}; }

/// Two stacked base pairs (i, j) and (i+1, j-1), 1-indexed.
struct Quartet {
    std::size_t i = 0;
    std::size_t j = 0;
    double energy = 0.0;
    Base outer5 = Base::A;
    Base outer3 = Base::A;

    std::array<std::size_t, 4> positions() const { return {i, i + 1, j - 1, j}; }
    bool outer_is_ua() const { return outer5 == Base::U && outer3 == Base::A; }
    bool operator==(const Quartet &) const = default;
};

inline constexpr std::size_t kDefaultMinLoop = 3;

/// Every quartet (i, j, i+1, j-1) whose two pairs are valid, with j - i > min_loop
/// and j - 1 > i + 1. Sorted by (i, j).
inline std::vector<Quartet> enumerate_quartets(const Sequence &seq, std::size_t min_loop,
                                               const StackEnergyTable &table) {
    std::vector<Quartet> out;
    const std::size_t n = seq.size();
    for (std::size_t i = 1; i + 3 <= n; ++i) {
        for (std::size_t j = i + 3; j <= n; ++j) {
            if (j - i <= min_loop) {
                continue;
            }
            Base a = seq.at(i), b = seq.at(j), c = seq.at(i + 1), d = seq.at(j - 1);
            if (!is_valid_pair(a, b) || !is_valid_pair(c, d)) {
                continue;
            }
            double e = table.lookup(StackEnergyTable::context(a, c, b, d));
            out.push_back(Quartet{i, j, e, a, b});
        }
    }
    return out;
}

inline std::vector<Quartet> enumerate_quartets(const Sequence &seq, std::size_t min_loop = kDefaultMinLoop) {
    return enumerate_quartets(seq, min_loop, StackEnergyTable::nearest_neighbor_default());
}

/// `b` stacks directly inside `a`: b = (a.i + 1, a.j - 1).
inline bool stacks_inside(const Quartet &a, const Quartet &b) { return b.i == a.i + 1 && b.j + 1 == a.j; }

inline bool pairs_cross(std::size_t p, std::size_t q, std::size_t r, std::size_t s) {
    return (p < r && r < q && q < s) || (r < p && p < s && s < q);
}

inline bool quartets_cross(const Quartet &a, const Quartet &b) {
    const std::array<VarPair, 2> pa{VarPair{a.i, a.j}, VarPair{a.i + 1, a.j - 1}};
    const std::array<VarPair, 2> pb{VarPair{b.i, b.j}, VarPair{b.i + 1, b.j - 1}};
    for (auto [p, q] : pa) {
        for (auto [r, s] : pb) {
            if (pairs_cross(p, q, r, s)) {
                return true;
            }
        }
    }
    return false;
}

inline bool quartets_share_base(const Quartet &a, const Quartet &b) {
    for (auto p : a.positions()) {
        for (auto q : b.positions()) {
            if (p == q) {
                return true;
            }
        }
    }
    return false;
}

struct QuboCoefficients {
    double r = -1.0;  ///< stacking reward (applied as r * q_i q_j)
    double p = 0.5;   ///< terminal UA penalty
    std::optional<double> t;  ///< conflict penalty; derived when unset
    bool ua_penalty = true;
};

/// Quadratic pseudo-boolean objective plus the quartet bookkeeping it was
/// assembled from.
class QuboProblem {
   public:
    QuboProblem() = default;
    explicit QuboProblem(std::size_t n_vars) : linear_(n_vars, 0.0) {}

    std::size_t n_vars() const noexcept { return linear_.size(); }
    const std::vector<double> &linear() const noexcept { return linear_; }
    const std::map<VarPair, double> &quadratic() const noexcept { return quadratic_; }
    double offset() const noexcept { return offset_; }

    void add_linear(std::size_t v, double value) {
        check(v);
        linear_[v] += value;
    }

    void add_quadratic(std::size_t a, std::size_t b, double value) {
        check(a);
        check(b);
        if (a == b) {
            // x^2 == x for binary variables
            linear_[a] += value;
            return;
        }
        quadratic_[ordered_pair(a, b)] += value;
    }

    void add_offset(double value) { offset_ += value; }

    double value(std::span<const std::uint8_t> x) const {
        if (x.size() != n_vars()) {
            throw Error(ErrorKind::LengthMismatch, "bitstring length does not match QUBO size");
        }
        double acc = offset_;
        for (std::size_t v = 0; v < linear_.size(); ++v) {
            if (x[v]) {
                acc += linear_[v];
            }
        }
        for (const auto &[key, value] : quadratic_) {
            if (x[key.first] && x[key.second]) {
                acc += value;
            }
        }
        return acc;
    }

    /// Fraction of variable pairs joined by a nonzero quadratic term.
    double edge_density() const {
        const double n = static_cast<double>(n_vars());
        if (n < 2) {
            return 0.0;
        }
        std::size_t edges = 0;
        for (const auto &[key, value] : quadratic_) {
            if (value != 0.0) {
                ++edges;
            }
        }
        return static_cast<double>(edges) / (n * (n - 1) / 2);
    }

    // Provenance of the assembled terms.
    double r = 0.0;
    double p = 0.0;
    double t = 0.0;
    std::vector<Quartet> quartets;
    std::vector<VarPair> conflicts;   ///< crossing or base-sharing pairs
    std::vector<VarPair> stacked;     ///< (outer, inner) stackable pairs
    std::vector<std::size_t> ua_set;  ///< quartets whose outer pair is U-A

   private:
    void check(std::size_t v) const {
        if (v >= linear_.size()) {
            throw Error(ErrorKind::IndexOutOfRange, "QUBO variable index out of range");
        }
    }

    std::vector<double> linear_;
    std::map<VarPair, double> quadratic_;
    double offset_ = 0.0;
};

/// 2 * (sum |e| + |r| * #stacked pairs), rounded up: one conflict always costs
/// more than every reward the objective can hand out.
inline double default_conflict_penalty(std::span<const Quartet> quartets, double r, std::size_t stacked_pairs) {
    double bound = 0.0;
    for (const auto &q : quartets) {
        bound += std::abs(q.energy);
    }
    bound += std::abs(r) * static_cast<double>(stacked_pairs);
    return std::max(1.0, std::ceil(2.0 * bound));
}

inline QuboProblem assemble_qubo(std::span<const Quartet> quartets, const QuboCoefficients &coeffs = {}) {
    if (quartets.empty()) {
        throw Error(ErrorKind::InvalidArgument, "empty problem: no quartets to assemble");
    }
    const std::size_t n = quartets.size();
    QuboProblem qubo(n);
    qubo.quartets.assign(quartets.begin(), quartets.end());

    for (std::size_t a = 0; a < n; ++a) {
        if (quartets[a].outer_is_ua()) {
            qubo.ua_set.push_back(a);
        }
        for (std::size_t b = a + 1; b < n; ++b) {
            const auto &qa = quartets[a];
            const auto &qb = quartets[b];
            if (stacks_inside(qa, qb)) {
                qubo.stacked.emplace_back(a, b);
            } else if (stacks_inside(qb, qa)) {
                qubo.stacked.emplace_back(b, a);
            } else if (quartets_cross(qa, qb) || quartets_share_base(qa, qb)) {
                qubo.conflicts.emplace_back(a, b);
            }
        }
    }

    qubo.r = coeffs.r;
    qubo.p = coeffs.ua_penalty ? coeffs.p : 0.0;
    qubo.t = coeffs.t.value_or(default_conflict_penalty(quartets, coeffs.r, qubo.stacked.size()));
    if (!(qubo.t > 0.0) || !std::isfinite(qubo.t)) {
        throw Error(ErrorKind::InvalidPenalty, "conflict penalty t must be positive");
    }

    for (std::size_t a = 0; a < n; ++a) {
        qubo.add_linear(a, quartets[a].energy);
    }
    for (auto [a, b] : qubo.stacked) {
        qubo.add_quadratic(a, b, qubo.r);
    }
    if (coeffs.ua_penalty && qubo.p != 0.0) {
        // p * q_a (1 - q_b) = p q_a - p q_a q_b; the a == b term vanishes.
        for (std::size_t a = 0; a < n; ++a) {
            for (auto b : qubo.ua_set) {
                if (a == b) {
                    continue;
                }
                qubo.add_linear(a, qubo.p);
                qubo.add_quadratic(a, b, -qubo.p);
            }
        }
    }
    for (auto [a, b] : qubo.conflicts) {
        qubo.add_quadratic(a, b, qubo.t);
    }
    return qubo;
}

inline QuboProblem build_qubo(const Sequence &seq, std::size_t min_loop, const StackEnergyTable &table,
                              const QuboCoefficients &coeffs = {}) {
    auto quartets = enumerate_quartets(seq, min_loop, table);
    return assemble_qubo(quartets, coeffs);
}

/// Base pairs (1-indexed) selected by an assignment of quartet variables.
inline std::vector<VarPair> selected_pairs(const QuboProblem &qubo, std::span<const std::uint8_t> x) {
    std::vector<VarPair> pairs;
    for (std::size_t v = 0; v < qubo.quartets.size() && v < x.size(); ++v) {
        if (x[v]) {
            const auto &q = qubo.quartets[v];
            pairs.emplace_back(q.i, q.j);
            pairs.emplace_back(q.i + 1, q.j - 1);
        }
    }
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    return pairs;
}

}  // namespace qcfold
