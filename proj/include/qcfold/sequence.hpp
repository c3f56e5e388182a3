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

#include <cctype>
#include <fstream>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "qcfold/common.hpp"

namespace qcfold {

enum class Base : std::uint8_t { A, C, G, U };

inline char to_char(Base b) {
    constexpr char letters[] = {'A', 'C', 'G', 'U'};
    return letters[static_cast<int>(b)];
}

/// An RNA sequence. Positions are 1-indexed in the public API (`at(1)` is the
/// first base) to match the usual way stems are written down.
class Sequence {
   public:
    Sequence() = default;
    explicit Sequence(std::vector<Base> bases) : bases_(std::move(bases)) {
        if (bases_.empty()) {
            throw Error(ErrorKind::EmptySequence, "sequence is empty");
        }
    }

    std::size_t size() const noexcept { return bases_.size(); }
    Base at(std::size_t position) const { return bases_.at(position - 1); }
    const std::vector<Base> &bases() const noexcept { return bases_; }

    std::string str() const {
        std::string out;
        out.reserve(bases_.size());
        for (auto b : bases_) {
            out.push_back(to_char(b));
        }
        return out;
    }

    bool operator==(const Sequence &) const = default;

   private:
    std::vector<Base> bases_;
};

/// Accepts A/C/G/U in either case. T is rejected: this is an RNA alphabet.
inline Sequence parse_sequence(std::string_view text) {
    if (text.empty()) {
        throw Error(ErrorKind::EmptySequence, "sequence is empty");
    }
    std::vector<Base> bases;
    bases.reserve(text.size());
    for (std::size_t k = 0; k < text.size(); ++k) {
        switch (std::toupper(static_cast<unsigned char>(text[k]))) {
            case 'A': bases.push_back(Base::A); break;
            case 'C': bases.push_back(Base::C); break;
            case 'G': bases.push_back(Base::G); break;
            case 'U': bases.push_back(Base::U); break;
            default:
                throw Error(ErrorKind::IllegalCharacter, "illegal character '" + std::string(1, text[k]) +
                                                             "' at position " + std::to_string(k + 1));
        }
    }
    return Sequence(std::move(bases));
}

/// One sequence per non-empty line; lines starting with '#' or '>' are skipped.
inline std::vector<Sequence> read_sequence_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::Parse, "cannot open sequence file " + path);
    }
    std::vector<Sequence> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) {
            line.pop_back();
        }
        std::size_t start = line.find_first_not_of(" \t");
        if (start == std::string::npos || line[start] == '#' || line[start] == '>') {
            continue;
        }
        try {
            out.push_back(parse_sequence(std::string_view(line).substr(start)));
        } catch (const Error &e) {
            throw Error(e.kind(), path + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

/// Watson-Crick and wobble pairs: AU, UA, CG, GC, GU, UG.
constexpr bool is_valid_pair(Base a, Base b) noexcept {
    using enum Base;
    return (a == A && b == U) || (a == U && b == A) || (a == C && b == G) || (a == G && b == C) ||
           (a == G && b == U) || (a == U && b == G);
}

template <class Rng>
Sequence random_sequence(std::size_t length, Rng &rng) {
    std::uniform_int_distribution<int> pick(0, 3);
    std::vector<Base> bases(length);
    for (auto &b : bases) {
        b = static_cast<Base>(pick(rng));
    }
    return Sequence(std::move(bases));
}

}  // namespace qcfold
