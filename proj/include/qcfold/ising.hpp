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

#include <bit>
#include <cmath>
#include <cstring>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "qcfold/common.hpp"
#include "qcfold/qubo.hpp"

namespace qcfold {

struct Coupling {
    std::size_t i = 0;
    std::size_t j = 0;
    double value = 0.0;
    bool operator==(const Coupling &) const = default;
};

/// E(s) = sum_i h_i s_i + sum_{i<j} J_ij s_i s_j + offset, with s_i = 1 - 2 x_i.
///
/// Couplings are kept sorted by (i, j) with i < j; duplicate keys are summed on
/// construction. Immutable once built.
class IsingHamiltonian {
   public:
    struct Neighbor {
        std::size_t index;
        double value;
    };

    IsingHamiltonian() = default;

    IsingHamiltonian(std::vector<double> h, const std::map<VarPair, double> &couplings, double offset)
        : h_(std::move(h)), offset_(offset) {
        std::map<VarPair, double> merged;
        for (const auto &[key, value] : couplings) {
            add_to(merged, key.first, key.second, value);
        }
        finish(merged);
    }

    IsingHamiltonian(std::vector<double> h, std::span<const Coupling> couplings, double offset)
        : h_(std::move(h)), offset_(offset) {
        std::map<VarPair, double> merged;
        for (const auto &c : couplings) {
            add_to(merged, c.i, c.j, c.value);
        }
        finish(merged);
    }

    static IsingHamiltonian zero(std::size_t n) { return IsingHamiltonian(std::vector<double>(n, 0.0), std::span<const Coupling>{}, 0.0); }

    std::size_t size() const noexcept { return h_.size(); }
    const std::vector<double> &linear() const noexcept { return h_; }
    const std::vector<Coupling> &couplings() const noexcept { return couplings_; }
    double offset() const noexcept { return offset_; }

    std::span<const Neighbor> neighbors(std::size_t i) const {
        return std::span<const Neighbor>(adjacency_).subspan(adjacency_start_[i],
                                                             adjacency_start_[i + 1] - adjacency_start_[i]);
    }

    /// Sum of |h_i| + |J_ij|; the largest possible energy span is twice this.
    double coefficient_l1() const {
        double acc = 0.0;
        for (double v : h_) {
            acc += std::abs(v);
        }
        for (const auto &c : couplings_) {
            acc += std::abs(c.value);
        }
        return acc;
    }

    /// Stable hash of all coefficients; recorded on scored sample sets.
    std::uint64_t fingerprint() const {
        std::uint64_t h = mix_seed(h_.size());
        auto feed = [&h](double v) { h = mix_seed(h ^ std::bit_cast<std::uint64_t>(v)); };
        for (double v : h_) {
            feed(v);
        }
        for (const auto &c : couplings_) {
            h = mix_seed(h ^ (c.i * 0x10001ull + c.j));
            feed(c.value);
        }
        feed(offset_);
        return h;
    }

    bool operator==(const IsingHamiltonian &other) const {
        return h_ == other.h_ && couplings_ == other.couplings_ && offset_ == other.offset_;
    }

   private:
    void add_to(std::map<VarPair, double> &merged, std::size_t i, std::size_t j, double value) const {
        if (i == j) {
            throw Error(ErrorKind::InvalidArgument, "coupling endpoints must differ");
        }
        if (i >= h_.size() || j >= h_.size()) {
            throw Error(ErrorKind::IndexOutOfRange, "coupling index out of range");
        }
        merged[ordered_pair(i, j)] += value;
    }

    void finish(const std::map<VarPair, double> &merged) {
        couplings_.reserve(merged.size());
        for (const auto &[key, value] : merged) {
            couplings_.push_back({key.first, key.second, value});
        }
        std::vector<std::size_t> degree(h_.size() + 1, 0);
        for (const auto &c : couplings_) {
            ++degree[c.i];
            ++degree[c.j];
        }
        adjacency_start_.assign(h_.size() + 1, 0);
        for (std::size_t i = 0; i < h_.size(); ++i) {
            adjacency_start_[i + 1] = adjacency_start_[i] + degree[i];
        }
        adjacency_.resize(adjacency_start_.back());
        std::vector<std::size_t> fill(adjacency_start_.begin(), adjacency_start_.end() - 1);
        for (const auto &c : couplings_) {
            adjacency_[fill[c.i]++] = {c.j, c.value};
            adjacency_[fill[c.j]++] = {c.i, c.value};
        }
    }

    std::vector<double> h_;
    std::vector<Coupling> couplings_;
    double offset_ = 0.0;
    std::vector<std::size_t> adjacency_start_{0};
    std::vector<Neighbor> adjacency_;
};

inline double spin(std::uint8_t bit) { return bit ? -1.0 : 1.0; }

inline double energy(const IsingHamiltonian &H, std::span<const std::uint8_t> x) {
    if (x.size() != H.size()) {
        throw Error(ErrorKind::LengthMismatch, "bitstring length " + std::to_string(x.size()) +
                                                   " does not match Hamiltonian size " + std::to_string(H.size()));
    }
    double acc = 0.0;
    const auto &h = H.linear();
    for (std::size_t i = 0; i < h.size(); ++i) {
        acc += h[i] * spin(x[i]);
    }
    for (const auto &c : H.couplings()) {
        acc += c.value * spin(x[c.i]) * spin(x[c.j]);
    }
    return acc + H.offset();
}

/// Substitutes x_i = (1 - s_i) / 2. qubo.value(x) == energy(result, x) for all x.
inline IsingHamiltonian qubo_to_ising(const QuboProblem &qubo) {
    std::vector<double> h(qubo.n_vars(), 0.0);
    std::map<VarPair, double> J;
    double offset = qubo.offset();
    for (std::size_t v = 0; v < qubo.n_vars(); ++v) {
        double a = qubo.linear()[v];
        h[v] -= a / 2;
        offset += a / 2;
    }
    for (const auto &[key, b] : qubo.quadratic()) {
        J[key] += b / 4;
        h[key.first] -= b / 4;
        h[key.second] -= b / 4;
        offset += b / 4;
    }
    return IsingHamiltonian(std::move(h), J, offset);
}

/// Which qubits are conjugated by X in the gauge transformation.
class GaugeMask {
   public:
    GaugeMask() = default;
    explicit GaugeMask(std::size_t n) : bits_(n, 0) {}
    explicit GaugeMask(Bitstring bits) : bits_(std::move(bits)) {}

    std::size_t size() const noexcept { return bits_.size(); }
    const Bitstring &bits() const noexcept { return bits_; }
    bool flipped(std::size_t q) const { return bits_.at(q) != 0; }
    void set(std::size_t q, bool value = true) { bits_.at(q) = value ? 1 : 0; }
    std::size_t count() const {
        std::size_t c = 0;
        for (auto b : bits_) {
            c += b;
        }
        return c;
    }

    /// x XOR m.
    Bitstring apply(std::span<const std::uint8_t> x) const {
        if (x.size() != bits_.size()) {
            throw Error(ErrorKind::LengthMismatch, "gauge mask length does not match bitstring");
        }
        Bitstring out(x.begin(), x.end());
        for (std::size_t q = 0; q < out.size(); ++q) {
            out[q] ^= bits_[q];
        }
        return out;
    }

    bool operator==(const GaugeMask &) const = default;

   private:
    Bitstring bits_;
};

/// X^m H X^m: h_i -> (-1)^{m_i} h_i, J_ij -> (-1)^{m_i + m_j} J_ij.
/// energy(result, x) == energy(H, x ^ m).
inline IsingHamiltonian gauge_transform(const IsingHamiltonian &H, const GaugeMask &mask) {
    if (mask.size() != H.size()) {
        throw Error(ErrorKind::LengthMismatch, "gauge mask length does not match Hamiltonian size");
    }
    std::vector<double> h = H.linear();
    for (std::size_t i = 0; i < h.size(); ++i) {
        if (mask.flipped(i)) {
            h[i] = -h[i];
        }
    }
    std::vector<Coupling> J = H.couplings();
    for (auto &c : J) {
        if (mask.flipped(c.i) != mask.flipped(c.j)) {
            c.value = -c.value;
        }
    }
    return IsingHamiltonian(std::move(h), std::span<const Coupling>(J), H.offset());
}

inline constexpr std::size_t kMaxBruteForceQubits = 24;

struct ExactSolution {
    Bitstring bits;
    double energy = 0.0;
};

/// Exhaustive minimum over all 2^n states by Gray-code traversal. Energies
/// within a relative 1e-9 of the best are ties, resolved toward the
/// lexicographically smallest bitstring.
inline ExactSolution brute_force_solve(const IsingHamiltonian &H) {
    const std::size_t n = H.size();
    if (n > kMaxBruteForceQubits) {
        throw Error(ErrorKind::TooLarge, "brute force limited to " + std::to_string(kMaxBruteForceQubits) +
                                             " variables, got " + std::to_string(n));
    }
    if (n == 0) {
        return {{}, H.offset()};
    }
    const double tol = 1e-9 * (1.0 + H.coefficient_l1());
    std::vector<double> spins(n, 1.0);
    // field_i = h_i + sum_j J_ij s_j; flipping i changes E by -2 s_i field_i.
    std::vector<double> field(H.linear());
    for (const auto &c : H.couplings()) {
        field[c.i] += c.value;
        field[c.j] += c.value;
    }
    double e = energy(H, Bitstring(n, 0));
    double best = e;
    std::uint64_t best_code = 0;
    const std::uint64_t states = std::uint64_t{1} << n;
    std::uint64_t code = 0;
    for (std::uint64_t k = 1; k < states; ++k) {
        const auto bit = static_cast<std::size_t>(std::countr_zero(k));
        const std::size_t q = n - 1 - bit;  // bit 0 is the most significant position
        e -= 2.0 * spins[q] * field[q];
        spins[q] = -spins[q];
        for (const auto &nb : H.neighbors(q)) {
            field[nb.index] += 2.0 * nb.value * spins[q];
        }
        code ^= std::uint64_t{1} << bit;
        if (e < best - tol) {
            best = e;
            best_code = code;
        } else if (e <= best + tol && code < best_code) {
            best = std::min(best, e);
            best_code = code;
        }
    }
    ExactSolution out;
    out.bits = bits_from_index(best_code, n);
    out.energy = energy(H, out.bits);
    return out;
}

}  // namespace qcfold
