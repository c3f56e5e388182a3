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

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "qcfold/sequence.hpp"

namespace qcfold {

/// Stacking free energies keyed by a 4-base context "XY/ZW": X-Z is the outer
/// pair, Y-W the inner pair, top strand read 5'->3' and bottom strand 3'->5'.
/// A stack read from the other strand ("WZ/YX") has the same energy, so only
/// one orientation has to be present.
///
/// Text format: one `CONTEXT VALUE` entry per line, `#` starts a comment.
class StackEnergyTable {
   public:
    StackEnergyTable() = default;

    static std::string context(Base outer5, Base inner5, Base outer3, Base inner3) {
        return {to_char(outer5), to_char(inner5), '/', to_char(outer3), to_char(inner3)};
    }

    static std::string mirror(const std::string &key) { return {key[4], key[3], '/', key[1], key[0]}; }

    void set(const std::string &key, double value) {
        validate_key(key);
        entries_[key] = value;
    }

    bool contains(const std::string &key) const {
        return entries_.count(key) != 0 || entries_.count(mirror(key)) != 0;
    }

    double lookup(const std::string &key) const {
        if (auto it = entries_.find(key); it != entries_.end()) {
            return it->second;
        }
        if (auto it = entries_.find(mirror(key)); it != entries_.end()) {
            return it->second;
        }
        throw Error(ErrorKind::UnknownStackContext, "no stacking energy for context " + key);
    }

    const std::map<std::string, double> &entries() const noexcept { return entries_; }

    static StackEnergyTable parse(std::istream &in, const std::string &origin = "<table>") {
        StackEnergyTable table;
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (auto hash = line.find('#'); hash != std::string::npos) {
                line.erase(hash);
            }
            std::istringstream fields(line);
            std::string key;
            if (!(fields >> key)) {
                continue;
            }
            double value = 0.0;
            std::string extra;
            if (!(fields >> value) || (fields >> extra) || !std::isfinite(value)) {
                throw Error(ErrorKind::Parse, origin + ":" + std::to_string(line_no) + ": expected `CONTEXT VALUE`");
            }
            for (auto &c : key) {
                c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
            }
            try {
                table.set(key, value);
            } catch (const Error &e) {
                throw Error(ErrorKind::Parse, origin + ":" + std::to_string(line_no) + ": " + e.what());
            }
        }
        return table;
    }

    static StackEnergyTable load(const std::string &path) {
        std::ifstream in(path);
        if (!in) {
            throw Error(ErrorKind::Parse, "cannot open energy table " + path);
        }
        return parse(in, path);
    }

    /// Nearest-neighbour stacking free energies at 37 C in kcal/mol. Watson-Crick
    /// stacks use the 2004 Turner set, GU-containing stacks the 1999 set.
    static StackEnergyTable nearest_neighbor_default() {
        static const char *text = R"(
AA/UU -0.93
AU/UA -1.10
UA/AU -1.33
CU/GA -2.08
CA/GU -2.11
GU/CA -2.24
GA/CU -2.35
CG/GC -2.36
GG/CC -3.26
GC/CG -3.42
AG/UU -0.55
AU/UG -1.36
CG/GU -1.41
CU/GG -2.11
GG/CU -1.53
GU/CG -2.51
GA/UU -1.27
GG/UU -0.50
GU/UG  1.29
UG/AU -1.00
UG/GU  0.30
)";
        std::istringstream in(text);
        return parse(in, "<default>");
    }

   private:
    static void validate_key(const std::string &key) {
        auto ok = [](char c) { return c == 'A' || c == 'C' || c == 'G' || c == 'U'; };
        if (key.size() != 5 || key[2] != '/' || !ok(key[0]) || !ok(key[1]) || !ok(key[3]) || !ok(key[4])) {
            throw Error(ErrorKind::Parse, "malformed stack context '" + key + "'");
        }
    }

    std::map<std::string, double> entries_;
};

}  // namespace qcfold
