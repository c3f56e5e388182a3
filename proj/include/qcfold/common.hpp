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

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qcfold {

/// Failure modes surfaced by the library. The CLI maps each kind onto an
/// exit code through `category()`.
enum class ErrorKind {
    EmptySequence,
    IllegalCharacter,
    UnknownStackContext,
    InvalidPenalty,
    KappaTooLarge,
    LengthMismatch,
    EmptySampleSet,
    BadAlpha,
    TooLarge,
    OverlappingLinks,
    SizeMismatch,
    IndexOutOfRange,
    InvalidArgument,
    Parse,
};

enum class ErrorCategory { Config, Domain, Capacity };

class Error : public std::runtime_error {
   public:
    Error(ErrorKind kind, const std::string &what) : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

    ErrorCategory category() const noexcept {
        switch (kind_) {
            case ErrorKind::KappaTooLarge:
            case ErrorKind::TooLarge:
                return ErrorCategory::Capacity;
            case ErrorKind::Parse:
                return ErrorCategory::Config;
            default:
                return ErrorCategory::Domain;
        }
    }

   private:
    ErrorKind kind_;
};

/// A computational-basis state, one byte per qubit, values 0 or 1.
/// Bit 0 is the leftmost character of the text form; bit value 0 is spin +1.
using Bitstring = std::vector<std::uint8_t>;

inline std::string to_string(std::span<const std::uint8_t> bits) {
    std::string out(bits.size(), '0');
    for (std::size_t k = 0; k < bits.size(); ++k) {
        if (bits[k]) {
            out[k] = '1';
        }
    }
    return out;
}

inline Bitstring bits_from_string(std::string_view text) {
    Bitstring out(text.size());
    for (std::size_t k = 0; k < text.size(); ++k) {
        if (text[k] == '1') {
            out[k] = 1;
        } else if (text[k] != '0') {
            throw Error(ErrorKind::Parse, "bitstring may only contain '0' and '1': " + std::string(text));
        }
    }
    return out;
}

/// Bits of `value` with bit 0 taken from the most significant of `n` bits, so
/// that integer order and lexicographic bitstring order coincide.
inline Bitstring bits_from_index(std::uint64_t value, std::size_t n) {
    Bitstring out(n);
    for (std::size_t q = 0; q < n; ++q) {
        out[q] = static_cast<std::uint8_t>((value >> (n - 1 - q)) & 1u);
    }
    return out;
}

inline std::uint64_t index_from_bits(std::span<const std::uint8_t> bits) {
    std::uint64_t value = 0;
    for (auto b : bits) {
        value = (value << 1) | (b & 1u);
    }
    return value;
}

struct BitstringHash {
    std::size_t operator()(const Bitstring &bits) const noexcept {
        std::uint64_t h = 1469598103934665603ull;
        for (auto b : bits) {
            h ^= b;
            h *= 1099511628211ull;
        }
        return static_cast<std::size_t>(h);
    }
};

/// splitmix64 finalizer. Used to derive independent per-run and per-call
/// seeds from a single user seed.
inline std::uint64_t mix_seed(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) noexcept {
    return mix_seed(mix_seed(base) ^ mix_seed(stream + 0x632be59bd9b4e019ull));
}

/// Pairwise (cascade) summation; keeps rounding error at O(log n) ulps so that
/// batch-order changes do not move results by more than ~1e-15 relative.
inline double pairwise_sum(std::span<const double> values) {
    if (values.size() <= 16) {
        double acc = 0.0;
        for (double v : values) {
            acc += v;
        }
        return acc;
    }
    std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

}  // namespace qcfold
