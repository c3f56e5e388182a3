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

#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "qcfold/iqp.hpp"
#include "qcfold/reduction.hpp"

namespace qcfold {

using Json = nlohmann::ordered_json;

namespace detail {

inline std::size_t parse_index(const std::string &text, const std::string &what) {
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
        v = std::stoull(text, &pos);
    } catch (const std::exception &) {
        throw Error(ErrorKind::Parse, "bad " + what + " index '" + text + "'");
    }
    if (pos != text.size()) {
        throw Error(ErrorKind::Parse, "bad " + what + " index '" + text + "'");
    }
    return static_cast<std::size_t>(v);
}

inline VarPair parse_pair_key(const std::string &key) {
    auto comma = key.find(',');
    if (comma == std::string::npos) {
        throw Error(ErrorKind::Parse, "quadratic key '" + key + "' is not of the form \"i,j\"");
    }
    return {parse_index(key.substr(0, comma), "quadratic"), parse_index(key.substr(comma + 1), "quadratic")};
}

template <class T>
T get_field(const Json &j, const char *key) {
    if (!j.contains(key)) {
        throw Error(ErrorKind::Parse, std::string("missing field '") + key + "'");
    }
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception &e) {
        throw Error(ErrorKind::Parse, std::string("field '") + key + "': " + e.what());
    }
}

}  // namespace detail

inline Json to_json(const QuboProblem &q) {
    Json j;
    j["n_vars"] = q.n_vars();
    Json lin = Json::object();
    for (std::size_t v = 0; v < q.n_vars(); ++v) {
        lin[std::to_string(v)] = q.linear()[v];
    }
    j["linear"] = std::move(lin);
    Json quad = Json::object();
    for (const auto &[key, value] : q.quadratic()) {
        quad[std::to_string(key.first) + "," + std::to_string(key.second)] = value;
    }
    j["quadratic"] = std::move(quad);
    j["offset"] = q.offset();
    j["coefficients"] = {{"r", q.r}, {"p", q.p}, {"t", q.t}};
    Json quartets = Json::array();
    for (const auto &qt : q.quartets) {
        quartets.push_back({{"i", qt.i}, {"j", qt.j}, {"energy", qt.energy}});
    }
    j["quartets"] = std::move(quartets);
    return j;
}

inline Json to_json(const IsingHamiltonian &H) {
    Json j;
    j["n_vars"] = H.size();
    Json lin = Json::object();
    for (std::size_t v = 0; v < H.size(); ++v) {
        lin[std::to_string(v)] = H.linear()[v];
    }
    j["linear"] = std::move(lin);
    Json quad = Json::object();
    for (const auto &c : H.couplings()) {
        quad[std::to_string(c.i) + "," + std::to_string(c.j)] = c.value;
    }
    j["quadratic"] = std::move(quad);
    j["offset"] = H.offset();
    return j;
}

/// Reads the {n_vars, linear, quadratic, offset} document as spin coefficients.
inline IsingHamiltonian ising_from_json(const Json &j) {
    const auto n = detail::get_field<std::size_t>(j, "n_vars");
    std::vector<double> h(n, 0.0);
    if (j.contains("linear")) {
        for (const auto &[key, value] : j.at("linear").items()) {
            auto v = detail::parse_index(key, "linear");
            if (v >= n) {
                throw Error(ErrorKind::Parse, "linear index " + key + " out of range");
            }
            h[v] += value.get<double>();
        }
    }
    std::vector<Coupling> couplings;
    if (j.contains("quadratic")) {
        for (const auto &[key, value] : j.at("quadratic").items()) {
            auto [a, b] = detail::parse_pair_key(key);
            if (a >= n || b >= n || a == b) {
                throw Error(ErrorKind::Parse, "quadratic key " + key + " invalid for " + std::to_string(n) + " variables");
            }
            couplings.push_back({a, b, value.get<double>()});
        }
    }
    const double offset = j.contains("offset") ? j.at("offset").get<double>() : 0.0;
    return IsingHamiltonian(std::move(h), std::span<const Coupling>(couplings), offset);
}

/// Reads the same document as 0/1 coefficients.
inline QuboProblem qubo_from_json(const Json &j) {
    const auto n = detail::get_field<std::size_t>(j, "n_vars");
    QuboProblem q(n);
    if (j.contains("linear")) {
        for (const auto &[key, value] : j.at("linear").items()) {
            auto v = detail::parse_index(key, "linear");
            if (v >= n) {
                throw Error(ErrorKind::Parse, "linear index " + key + " out of range");
            }
            q.add_linear(v, value.get<double>());
        }
    }
    if (j.contains("quadratic")) {
        for (const auto &[key, value] : j.at("quadratic").items()) {
            auto [a, b] = detail::parse_pair_key(key);
            if (a >= n || b >= n) {
                throw Error(ErrorKind::Parse, "quadratic key " + key + " out of range");
            }
            q.add_quadratic(a, b, value.get<double>());
        }
    }
    if (j.contains("offset")) {
        q.add_offset(j.at("offset").get<double>());
    }
    if (j.contains("coefficients")) {
        const auto &c = j.at("coefficients");
        q.r = c.value("r", q.r);
        q.p = c.value("p", q.p);
        q.t = c.value("t", q.t);
    }
    return q;
}

inline Json to_json(const IqpCircuit &c) {
    Json j;
    j["n"] = c.n_qubits();
    Json gates = Json::array();
    for (const auto &g : c.gates()) {
        std::string mask(c.n_qubits(), '0');
        for (auto q : g.support) {
            mask[q] = '1';
        }
        gates.push_back({{"mask", mask}, {"theta", g.theta}});
    }
    j["gates"] = std::move(gates);
    j["layout"] = c.layout();
    return j;
}

inline IqpCircuit circuit_from_json(const Json &j) {
    const auto n = detail::get_field<std::size_t>(j, "n");
    std::vector<IqpGate> gates;
    for (const auto &g : detail::get_field<Json>(j, "gates")) {
        const auto mask = detail::get_field<std::string>(g, "mask");
        if (mask.size() != n) {
            throw Error(ErrorKind::Parse, "gate mask '" + mask + "' does not have " + std::to_string(n) + " bits");
        }
        IqpGate gate;
        const auto bits = bits_from_string(mask);
        for (std::size_t q = 0; q < n; ++q) {
            if (bits[q]) {
                gate.support.push_back(q);
            }
        }
        gate.theta = g.value("theta", 0.0);
        gates.push_back(std::move(gate));
    }
    return IqpCircuit(n, std::move(gates), j.value("layout", std::string("custom")));
}

inline Json to_json(const Sample &s) {
    Json j;
    j["bits"] = to_string(s.bits);
    j["count"] = s.count;
    if (std::isnan(s.energy)) {
        j["energy"] = nullptr;
    } else {
        j["energy"] = s.energy;
    }
    return j;
}

/// One JSON record per distinct bitstring.
inline void write_jsonl(std::ostream &out, const SampleSet &samples) {
    for (const auto &s : samples.samples()) {
        out << to_json(s).dump() << '\n';
    }
}

inline SampleSet read_samples_jsonl(std::istream &in, std::size_t n_qubits) {
    std::map<Bitstring, std::uint64_t> counts;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        try {
            auto j = Json::parse(line);
            counts[bits_from_string(j.at("bits").get<std::string>())] += j.at("count").get<std::uint64_t>();
        } catch (const nlohmann::json::exception &e) {
            throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return SampleSet::from_counts(n_qubits, std::move(counts));
}

inline void write_jsonl(std::ostream &out, std::span<const TraceRecord> trace) {
    for (const auto &t : trace) {
        Json j;
        j["iter"] = t.iter;
        j["param_index"] = t.param_index;
        j["cvar"] = t.cvar;
        j["best_energy_so_far"] = t.best_energy_so_far;
        out << j.dump() << '\n';
    }
}

/// Debug dump of an MPS: bond shapes and norm.
template <class Scalar>
Json mps_dump(const BasicMps<Scalar> &mps) {
    Json j;
    j["n"] = mps.size();
    Json sites = Json::array();
    for (const auto &s : mps.sites()) {
        sites.push_back({s.left, 2, s.right});
    }
    j["shapes"] = std::move(sites);
    j["max_bond"] = mps.max_bond();
    j["norm"] = mps.norm();
    return j;
}

inline Json read_json_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::Parse, "cannot open " + path);
    }
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::parse_error &e) {
        throw Error(ErrorKind::Parse, path + ": " + e.what());
    }
}

}  // namespace qcfold
