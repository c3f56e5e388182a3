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
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "qcfold/ising.hpp"

namespace qcfold {

struct Sample {
    Bitstring bits;
    std::uint64_t count = 0;
    double energy = std::numeric_limits<double>::quiet_NaN();
};

/// Measurement record: distinct bitstrings with multiplicities, kept in
/// lexicographic order. Energies are filled in by `score`, which also records
/// which Hamiltonian they belong to.
class SampleSet {
   public:
    SampleSet() = default;
    explicit SampleSet(std::size_t n_qubits) : n_(n_qubits) {}

    /// Merges duplicates and sorts. Energies are dropped.
    static SampleSet from_counts(std::size_t n_qubits, std::map<Bitstring, std::uint64_t> counts) {
        SampleSet out(n_qubits);
        out.samples_.reserve(counts.size());
        for (auto &[bits, count] : counts) {
            if (count == 0) {
                continue;
            }
            if (bits.size() != n_qubits) {
                throw Error(ErrorKind::LengthMismatch, "sample length does not match qubit count");
            }
            out.samples_.push_back({bits, count});
            out.shots_ += count;
        }
        return out;
    }

    static SampleSet from_shots(std::size_t n_qubits, std::span<const Bitstring> shots) {
        std::map<Bitstring, std::uint64_t> counts;
        for (const auto &s : shots) {
            ++counts[s];
        }
        return from_counts(n_qubits, std::move(counts));
    }

    /// Appends an entry that is known to be new and to sort after every
    /// existing one (samplers emit in order).
    void push_sorted(Bitstring bits, std::uint64_t count) {
        samples_.push_back({std::move(bits), count});
        shots_ += count;
    }

    std::size_t n_qubits() const noexcept { return n_; }
    std::uint64_t shots() const noexcept { return shots_; }
    std::size_t distinct() const noexcept { return samples_.size(); }
    bool empty() const noexcept { return samples_.empty(); }
    const std::vector<Sample> &samples() const noexcept { return samples_; }
    std::optional<std::uint64_t> scored_by() const noexcept { return scored_by_; }

    void score(const IsingHamiltonian &H) {
        for (auto &s : samples_) {
            s.energy = energy(H, s.bits);
        }
        scored_by_ = H.fingerprint();
    }

    /// Bitwise transform of every shot, re-merged. Energies are dropped.
    template <class Fn>
    SampleSet transformed(Fn &&fn) const {
        std::map<Bitstring, std::uint64_t> counts;
        for (const auto &s : samples_) {
            counts[fn(s.bits)] += s.count;
        }
        return from_counts(n_, std::move(counts));
    }

    /// <Z_q> estimated from the shots.
    std::vector<double> z_expectations() const {
        std::vector<double> z(n_, 0.0);
        if (shots_ == 0) {
            return z;
        }
        for (const auto &s : samples_) {
            for (std::size_t q = 0; q < n_; ++q) {
                z[q] += static_cast<double>(s.count) * spin(s.bits[q]);
            }
        }
        for (auto &v : z) {
            v /= static_cast<double>(shots_);
        }
        return z;
    }

    double mean_hamming_weight() const {
        if (shots_ == 0) {
            return 0.0;
        }
        double acc = 0.0;
        for (const auto &s : samples_) {
            std::size_t w = 0;
            for (auto b : s.bits) {
                w += b;
            }
            acc += static_cast<double>(w) * static_cast<double>(s.count);
        }
        return acc / static_cast<double>(shots_);
    }

    /// Lowest-energy entry; requires a scored set.
    const Sample &best() const {
        if (samples_.empty()) {
            throw Error(ErrorKind::EmptySampleSet, "sample set is empty");
        }
        require_scored();
        return *std::min_element(samples_.begin(), samples_.end(),
                                 [](const Sample &a, const Sample &b) { return a.energy < b.energy; });
    }

    double mean_energy() const {
        if (samples_.empty()) {
            throw Error(ErrorKind::EmptySampleSet, "sample set is empty");
        }
        require_scored();
        double acc = 0.0;
        for (const auto &s : samples_) {
            acc += s.energy * static_cast<double>(s.count);
        }
        return acc / static_cast<double>(shots_);
    }

    std::vector<std::pair<double, std::uint64_t>> weighted_energies() const {
        require_scored();
        std::vector<std::pair<double, std::uint64_t>> out;
        out.reserve(samples_.size());
        for (const auto &s : samples_) {
            out.emplace_back(s.energy, s.count);
        }
        return out;
    }

    bool operator==(const SampleSet &other) const {
        if (n_ != other.n_ || shots_ != other.shots_ || samples_.size() != other.samples_.size()) {
            return false;
        }
        for (std::size_t k = 0; k < samples_.size(); ++k) {
            if (samples_[k].bits != other.samples_[k].bits || samples_[k].count != other.samples_[k].count) {
                return false;
            }
        }
        return true;
    }

   private:
    void require_scored() const {
        if (!scored_by_) {
            throw Error(ErrorKind::InvalidArgument, "sample set has not been scored");
        }
    }

    std::size_t n_ = 0;
    std::uint64_t shots_ = 0;
    std::vector<Sample> samples_;
    std::optional<std::uint64_t> scored_by_;
};

/// Mean of the k = max(1, floor(alpha * N)) lowest energies, counted with
/// multiplicity.
inline double cvar(std::vector<std::pair<double, std::uint64_t>> energies, double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw Error(ErrorKind::BadAlpha, "CVaR alpha must lie in (0, 1]");
    }
    std::uint64_t total = 0;
    for (const auto &[e, c] : energies) {
        total += c;
    }
    if (total == 0) {
        throw Error(ErrorKind::EmptySampleSet, "CVaR of an empty sample set");
    }
    // The epsilon absorbs representation error in alpha (0.29 * 100 -> 28.999...).
    auto k = static_cast<std::uint64_t>(std::floor(alpha * static_cast<double>(total) + 1e-9));
    k = std::max<std::uint64_t>(1, std::min(k, total));
    std::sort(energies.begin(), energies.end());
    double acc = 0.0;
    std::uint64_t taken = 0;
    for (const auto &[e, c] : energies) {
        std::uint64_t use = std::min(c, k - taken);
        acc += e * static_cast<double>(use);
        taken += use;
        if (taken == k) {
            break;
        }
    }
    return acc / static_cast<double>(k);
}

inline double cvar(const SampleSet &samples, double alpha) { return cvar(samples.weighted_energies(), alpha); }

}  // namespace qcfold
