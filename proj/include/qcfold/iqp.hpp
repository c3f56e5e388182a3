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
#include <complex>
#include <numbers>
#include <queue>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "qcfold/vqa.hpp"

namespace qcfold {

using Edge = std::pair<std::size_t, std::size_t>;

/// exp(-i theta Z_a) or exp(-i theta Z_a Z_b).
struct IqpGate {
    std::vector<std::size_t> support;  ///< ascending, one or two qubits
    double theta = 0.0;

    bool operator==(const IqpGate &) const = default;
};

/// U(theta) = H^n D(theta) H^n with D a product of commuting Z / ZZ rotations.
class IqpCircuit {
   public:
    IqpCircuit() = default;
    IqpCircuit(std::size_t n, std::vector<IqpGate> gates, std::string layout = "custom")
        : n_(n), gates_(std::move(gates)), layout_(std::move(layout)) {
        for (auto &g : gates_) {
            std::sort(g.support.begin(), g.support.end());
            if (g.support.empty() || g.support.size() > 2) {
                throw Error(ErrorKind::InvalidArgument, "IQP gates act on one or two qubits");
            }
            if (g.support.size() == 2 && g.support[0] == g.support[1]) {
                throw Error(ErrorKind::InvalidArgument, "two-qubit IQP gate needs distinct qubits");
            }
            if (g.support.back() >= n_) {
                throw Error(ErrorKind::IndexOutOfRange, "IQP gate qubit out of range");
            }
            if (!std::isfinite(g.theta)) {
                throw Error(ErrorKind::InvalidArgument, "IQP gate angle must be finite");
            }
        }
    }

    /// One Z gate per qubit (when `singles`) plus one ZZ gate per edge, all at angle 0.
    static IqpCircuit from_edges(std::size_t n, std::span<const Edge> edges, bool singles = true,
                                 std::string layout = "custom") {
        std::vector<IqpGate> gates;
        if (singles) {
            for (std::size_t q = 0; q < n; ++q) {
                gates.push_back({{q}, 0.0});
            }
        }
        for (auto [a, b] : edges) {
            gates.push_back({{std::min(a, b), std::max(a, b)}, 0.0});
        }
        return IqpCircuit(n, std::move(gates), std::move(layout));
    }

    std::size_t n_qubits() const noexcept { return n_; }
    const std::vector<IqpGate> &gates() const noexcept { return gates_; }
    const std::string &layout() const noexcept { return layout_; }

    std::vector<double> thetas() const {
        std::vector<double> out;
        out.reserve(gates_.size());
        for (const auto &g : gates_) {
            out.push_back(g.theta);
        }
        return out;
    }

    void set_thetas(std::span<const double> theta) {
        if (theta.size() != gates_.size()) {
            throw Error(ErrorKind::SizeMismatch, "need one angle per IQP gate");
        }
        for (std::size_t k = 0; k < gates_.size(); ++k) {
            gates_[k].theta = theta[k];
        }
    }

    IqpCircuit with_thetas(std::span<const double> theta) const {
        IqpCircuit out = *this;
        out.set_thetas(theta);
        return out;
    }

   private:
    std::size_t n_ = 0;
    std::vector<IqpGate> gates_;
    std::string layout_ = "custom";
};

/// Selects the observable prod_k Z_k^{p_k}; stored as the list of k with p_k = 1.
struct ObservableMask {
    std::size_t n = 0;
    std::vector<std::size_t> support;

    static ObservableMask single(std::size_t n, std::size_t q) { return {n, {q}}; }
    static ObservableMask pair(std::size_t n, std::size_t a, std::size_t b) {
        return {n, {std::min(a, b), std::max(a, b)}};
    }
    static ObservableMask from_bits(std::span<const std::uint8_t> bits) {
        ObservableMask m{bits.size(), {}};
        for (std::size_t k = 0; k < bits.size(); ++k) {
            if (bits[k]) {
                m.support.push_back(k);
            }
        }
        return m;
    }
};

namespace detail {

inline bool odd_overlap(const std::vector<std::size_t> &a, const std::vector<std::size_t> &b) {
    std::size_t common = 0;
    for (auto x : a) {
        common += std::count(b.begin(), b.end(), x);
    }
    return common % 2 == 1;
}

/// Gates that anticommute with the observable: m.p odd. Only they enter the
/// phase difference; for them (-1)^{m.(y+p)} - (-1)^{m.y} = -2 (-1)^{m.y}.
inline std::vector<std::size_t> contributing_gates(const IqpCircuit &c, const ObservableMask &p) {
    if (p.n != c.n_qubits()) {
        throw Error(ErrorKind::LengthMismatch, "observable width does not match circuit");
    }
    for (auto q : p.support) {
        if (q >= c.n_qubits()) {
            throw Error(ErrorKind::IndexOutOfRange, "observable qubit out of range");
        }
    }
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < c.gates().size(); ++k) {
        if (odd_overlap(c.gates()[k].support, p.support)) {
            out.push_back(k);
        }
    }
    return out;
}

inline double parity_sign(const std::vector<std::size_t> &support, std::span<const std::uint8_t> y) {
    std::uint8_t parity = 0;
    for (auto q : support) {
        parity ^= y[q];
    }
    return parity ? -1.0 : 1.0;
}

/// cos[ sum_j theta_j ((-1)^{m_j.(y+p)} - (-1)^{m_j.y}) ] for one y.
inline double iqp_term(const IqpCircuit &c, std::span<const std::size_t> contributing, std::span<const std::uint8_t> y) {
    double phase = 0.0;
    for (auto k : contributing) {
        const auto &g = c.gates()[k];
        phase += -2.0 * g.theta * parity_sign(g.support, y);
    }
    return std::cos(phase);
}

}  // namespace detail

inline constexpr std::size_t kMaxIqpExactQubits = 20;

/// <0|U^dag Z^p U|0> = 2^-n sum_y cos[ sum_j theta_j ((-1)^{m_j.(y+p)} - (-1)^{m_j.y}) ].
inline double exact_expectation(const IqpCircuit &c, const ObservableMask &p) {
    const std::size_t n = c.n_qubits();
    if (n > kMaxIqpExactQubits) {
        throw Error(ErrorKind::TooLarge, "exact IQP expectation limited to " + std::to_string(kMaxIqpExactQubits) +
                                             " qubits, got " + std::to_string(n));
    }
    const auto contributing = detail::contributing_gates(c, p);
    if (contributing.empty()) {
        return 1.0;
    }
    const std::uint64_t states = std::uint64_t{1} << n;
    std::vector<double> terms(states);
    Bitstring y(n);
    for (std::uint64_t k = 0; k < states; ++k) {
        for (std::size_t q = 0; q < n; ++q) {
            y[q] = static_cast<std::uint8_t>((k >> (n - 1 - q)) & 1u);
        }
        terms[k] = detail::iqp_term(c, contributing, y);
    }
    return pairwise_sum(terms) / static_cast<double>(states);
}

/// Uniform y-samples shared by every term of one estimate.
inline std::vector<Bitstring> uniform_bitstrings(std::size_t n, std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<Bitstring> ys(count, Bitstring(n));
    for (auto &y : ys) {
        for (std::size_t q = 0; q < n; q += 64) {
            std::uint64_t word = rng();
            for (std::size_t b = 0; b < 64 && q + b < n; ++b) {
                y[q + b] = static_cast<std::uint8_t>((word >> b) & 1u);
            }
        }
    }
    return ys;
}

struct Estimate {
    double mean = 0.0;
    double std_dev = 0.0;  ///< sample standard deviation of the per-y terms
    double std_error = 0.0;
};

inline Estimate estimate_expectation(const IqpCircuit &c, const ObservableMask &p, std::span<const Bitstring> ys) {
    if (ys.empty()) {
        throw Error(ErrorKind::InvalidArgument, "need at least one sample bitstring");
    }
    const auto contributing = detail::contributing_gates(c, p);
    if (contributing.empty()) {
        return {1.0, 0.0, 0.0};
    }
    std::vector<double> terms(ys.size());
    for (std::size_t k = 0; k < ys.size(); ++k) {
        terms[k] = detail::iqp_term(c, contributing, ys[k]);
    }
    Estimate e;
    e.mean = pairwise_sum(terms) / static_cast<double>(terms.size());
    if (terms.size() > 1) {
        for (auto &t : terms) {
            t = (t - e.mean) * (t - e.mean);
        }
        e.std_dev = std::sqrt(pairwise_sum(terms) / static_cast<double>(terms.size() - 1));
        e.std_error = e.std_dev / std::sqrt(static_cast<double>(terms.size()));
    }
    return e;
}

/// Monte-Carlo mean of the cosine over uniform y.
inline Estimate estimate_expectation(const IqpCircuit &c, const ObservableMask &p, std::size_t n_bitstrings,
                                     std::uint64_t seed) {
    if (n_bitstrings == 0) {
        throw Error(ErrorKind::InvalidArgument, "need at least one sample bitstring");
    }
    auto ys = uniform_bitstrings(c.n_qubits(), n_bitstrings, seed);
    return estimate_expectation(c, p, ys);
}

/// sum h_i <Z_i> + sum J_ij <Z_i Z_j> + offset, every term estimated from the same ys.
inline double hamiltonian_expectation(const IqpCircuit &c, const IsingHamiltonian &H, std::span<const Bitstring> ys) {
    if (H.size() != c.n_qubits()) {
        throw Error(ErrorKind::LengthMismatch, "Hamiltonian size does not match circuit");
    }
    const std::size_t n = H.size();
    double acc = H.offset();
    for (std::size_t q = 0; q < n; ++q) {
        if (H.linear()[q] != 0.0) {
            acc += H.linear()[q] * estimate_expectation(c, ObservableMask::single(n, q), ys).mean;
        }
    }
    for (const auto &cp : H.couplings()) {
        if (cp.value != 0.0) {
            acc += cp.value * estimate_expectation(c, ObservableMask::pair(n, cp.i, cp.j), ys).mean;
        }
    }
    return acc;
}

inline double hamiltonian_expectation(const IqpCircuit &c, const IsingHamiltonian &H, std::size_t n_bitstrings,
                                      std::uint64_t seed) {
    auto ys = uniform_bitstrings(c.n_qubits(), n_bitstrings, seed);
    return hamiltonian_expectation(c, H, ys);
}

/// Same quantity with every term computed exactly.
inline double exact_hamiltonian_expectation(const IqpCircuit &c, const IsingHamiltonian &H) {
    if (H.size() != c.n_qubits()) {
        throw Error(ErrorKind::LengthMismatch, "Hamiltonian size does not match circuit");
    }
    const std::size_t n = H.size();
    double acc = H.offset();
    for (std::size_t q = 0; q < n; ++q) {
        if (H.linear()[q] != 0.0) {
            acc += H.linear()[q] * exact_expectation(c, ObservableMask::single(n, q));
        }
    }
    for (const auto &cp : H.couplings()) {
        if (cp.value != 0.0) {
            acc += cp.value * exact_expectation(c, ObservableMask::pair(n, cp.i, cp.j));
        }
    }
    return acc;
}

/// Exact <Z_q> for every qubit.
inline std::vector<double> single_qubit_expectations(const IqpCircuit &c) {
    std::vector<double> z(c.n_qubits());
    for (std::size_t q = 0; q < z.size(); ++q) {
        z[q] = exact_expectation(c, ObservableMask::single(c.n_qubits(), q));
    }
    return z;
}

enum class IqpEvaluator { MonteCarlo, Exact };

struct IqpTrainConfig {
    std::size_t n_iter = 0;  ///< NFT iterations; 0 means three sweeps over all gates
    std::size_t n_bitstrings = std::size_t{1} << 15;
    IqpEvaluator evaluator = IqpEvaluator::MonteCarlo;
    std::uint64_t seed = 0;
};

struct IqpTrainResult {
    std::vector<double> theta;
    std::vector<double> trace;  ///< objective at the start of every iteration, then the final value
    std::size_t evaluations = 0;
};

/// NFT training of the gate angles against <H>. The e^{-i theta Z} gates make
/// every term sinusoidal in theta with frequency 2. The Monte-Carlo evaluator
/// uses one fixed set of uniform y-samples for the whole run.
inline IqpTrainResult train_iqp(const IsingHamiltonian &H, const IqpCircuit &circuit, const IqpTrainConfig &config) {
    if (H.size() != circuit.n_qubits()) {
        throw Error(ErrorKind::LengthMismatch, "Hamiltonian size does not match circuit");
    }
    if (circuit.gates().empty()) {
        throw Error(ErrorKind::InvalidArgument, "IQP circuit has no gates to train");
    }
    IqpTrainResult out;
    std::mt19937_64 rng(derive_seed(config.seed, 0));
    std::uniform_real_distribution<double> angle(0.0, 2 * std::numbers::pi);
    out.theta.resize(circuit.gates().size());
    for (auto &t : out.theta) {
        t = angle(rng);
    }
    std::vector<Bitstring> ys;
    if (config.evaluator == IqpEvaluator::MonteCarlo) {
        ys = uniform_bitstrings(circuit.n_qubits(), config.n_bitstrings, derive_seed(config.seed, 1));
    }
    IqpCircuit work = circuit;
    auto objective = [&](const std::vector<double> &theta) {
        ++out.evaluations;
        work.set_thetas(theta);
        return config.evaluator == IqpEvaluator::Exact ? exact_hamiltonian_expectation(work, H)
                                                       : hamiltonian_expectation(work, H, ys);
    };
    const std::size_t total = config.n_iter > 0 ? config.n_iter : 3 * out.theta.size();
    std::vector<std::size_t> order(out.theta.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::size_t iter = 0;
    while (iter < total) {
        std::shuffle(order.begin(), order.end(), rng);
        for (std::size_t k = 0; k < order.size() && iter < total; ++k, ++iter) {
            auto step = nft_step(objective, out.theta, order[k], 2.0);
            out.trace.push_back(step.z0);
        }
    }
    out.trace.push_back(objective(out.theta));
    return out;
}

/// In-place Walsh-Hadamard butterfly (unnormalised).
template <class T>
void fwht(std::vector<T> &a) {
    const std::size_t N = a.size();
    for (std::size_t len = 1; len < N; len <<= 1) {
        for (std::size_t i = 0; i < N; i += len << 1) {
            for (std::size_t j = i; j < i + len; ++j) {
                const T u = a[j];
                const T v = a[j + len];
                a[j] = u + v;
                a[j + len] = u - v;
            }
        }
    }
}

/// Output amplitudes U|0>, index with qubit 0 as the most significant bit.
inline std::vector<std::complex<double>> iqp_statevector(const IqpCircuit &c) {
    const std::size_t n = c.n_qubits();
    if (n > kMaxIqpExactQubits) {
        throw Error(ErrorKind::TooLarge, "exact IQP simulation limited to " + std::to_string(kMaxIqpExactQubits) +
                                             " qubits, got " + std::to_string(n));
    }
    const std::uint64_t N = std::uint64_t{1} << n;
    std::vector<std::complex<double>> amp(N);
    const double norm = 1.0 / static_cast<double>(N);
    for (std::uint64_t x = 0; x < N; ++x) {
        double phase = 0.0;
        for (const auto &g : c.gates()) {
            std::uint64_t parity = 0;
            for (auto q : g.support) {
                parity ^= (x >> (n - 1 - q)) & 1u;
            }
            phase -= g.theta * (parity ? -1.0 : 1.0);
        }
        amp[x] = std::polar(norm, phase);
    }
    fwht(amp);
    return amp;
}

/// Exact sampling from |<x|U|0>|^2.
inline SampleSet exact_sample(const IqpCircuit &c, std::uint64_t shots, std::uint64_t seed) {
    const std::size_t n = c.n_qubits();
    const auto amp = iqp_statevector(c);
    std::vector<double> cdf(amp.size());
    double acc = 0.0;
    for (std::size_t x = 0; x < amp.size(); ++x) {
        acc += std::norm(amp[x]);
        cdf[x] = acc;
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, acc);
    std::map<std::uint64_t, std::uint64_t> hist;
    for (std::uint64_t s = 0; s < shots; ++s) {
        auto it = std::upper_bound(cdf.begin(), cdf.end(), unif(rng));
        auto x = static_cast<std::uint64_t>(std::min<std::ptrdiff_t>(it - cdf.begin(), cdf.size() - 1));
        // Zero-probability states cannot be drawn: skip flat CDF runs.
        while (x > 0 && cdf[x] == cdf[x - 1]) {
            --x;
        }
        ++hist[x];
    }
    SampleSet out(n);
    for (const auto &[x, count] : hist) {
        out.push_sorted(bits_from_index(x, n), count);
    }
    return out;
}

/// Forces qubits whose exact |<Z_q>| exceeds z_th to the value their sign
/// dictates (0 for positive, 1 for negative).
inline SampleSet mitigate_samples(const SampleSet &samples, std::span<const double> singles, double z_th = 0.99) {
    if (singles.size() != samples.n_qubits()) {
        throw Error(ErrorKind::LengthMismatch, "need one expectation value per qubit");
    }
    std::vector<std::pair<std::size_t, std::uint8_t>> forced;
    for (std::size_t q = 0; q < singles.size(); ++q) {
        if (std::abs(singles[q]) > z_th) {
            forced.emplace_back(q, singles[q] > 0.0 ? 0 : 1);
        }
    }
    return samples.transformed([&](const Bitstring &b) {
        Bitstring out = b;
        for (auto [q, v] : forced) {
            out[q] = v;
        }
        return out;
    });
}

/// Brick-wall heavy-hex lattice: `rows` x `cols` degree-3 sites, horizontal
/// links along rows and vertical links where (r + c) is even; every link is
/// subdivided by a degree-2 bridge qubit. With `tube` the rows are closed into
/// rings. Site (r, c) is vertex r * cols + c; bridges follow in edge order.
struct HeavyHexGraph {
    std::size_t n_vertices = 0;
    std::vector<Edge> edges;
};

inline HeavyHexGraph heavy_hex_lattice(std::size_t rows, std::size_t cols, bool tube) {
    if (rows < 1 || cols < 2 || (tube && (cols < 4 || cols % 2 != 0))) {
        throw Error(ErrorKind::InvalidArgument, "unsupported heavy-hex lattice shape");
    }
    std::vector<Edge> links;
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c + 1 < cols; ++c) {
            links.emplace_back(r * cols + c, r * cols + c + 1);
        }
        if (tube) {
            links.emplace_back(r * cols, r * cols + cols - 1);
        }
    }
    for (std::size_t r = 0; r + 1 < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            if ((r + c) % 2 == 0) {
                links.emplace_back(r * cols + c, (r + 1) * cols + c);
            }
        }
    }
    HeavyHexGraph g;
    g.n_vertices = rows * cols;
    for (auto [a, b] : links) {
        const std::size_t bridge = g.n_vertices++;
        g.edges.emplace_back(std::min(a, bridge), std::max(a, bridge));
        g.edges.emplace_back(std::min(b, bridge), std::max(b, bridge));
    }
    std::sort(g.edges.begin(), g.edges.end());
    return g;
}

/// Heavy-hex lattice of the given code distance (d rows of 2d sites), open.
inline HeavyHexGraph heavy_hex_layout(std::size_t distance) {
    if (distance < 2) {
        throw Error(ErrorKind::InvalidArgument, "heavy-hex distance must be at least 2");
    }
    return heavy_hex_lattice(distance, 2 * distance, false);
}

/// Same lattice with the rows wrapped around into a tube.
inline HeavyHexGraph heavy_hex_tube_layout(std::size_t distance) {
    if (distance < 2) {
        throw Error(ErrorKind::InvalidArgument, "heavy-hex distance must be at least 2");
    }
    return heavy_hex_lattice(distance, 2 * distance, true);
}

/// Induced subgraph on the first n vertices of a breadth-first traversal
/// from vertex 0 of the smallest tube with at least n vertices, relabelled
/// in visiting order. Used to lay an n-variable problem onto the tube.
inline std::vector<Edge> heavy_hex_tube_edges(std::size_t n) {
    if (n == 0) {
        return {};
    }
    std::size_t d = 2;
    while (heavy_hex_tube_layout(d).n_vertices < n) {
        ++d;
    }
    const auto g = heavy_hex_tube_layout(d);
    std::vector<std::vector<std::size_t>> adj(g.n_vertices);
    for (auto [a, b] : g.edges) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    for (auto &nb : adj) {
        std::sort(nb.begin(), nb.end());
    }
    const std::size_t none = g.n_vertices;
    std::vector<std::size_t> label(g.n_vertices, none);
    std::queue<std::size_t> frontier;
    frontier.push(0);
    label[0] = 0;
    std::size_t next = 1;
    while (!frontier.empty() && next < n) {
        auto v = frontier.front();
        frontier.pop();
        for (auto w : adj[v]) {
            if (label[w] == none && next < n) {
                label[w] = next++;
                frontier.push(w);
            }
        }
    }
    std::vector<Edge> out;
    for (auto [a, b] : g.edges) {
        if (label[a] != none && label[b] != none) {
            out.emplace_back(std::min(label[a], label[b]), std::max(label[a], label[b]));
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace qcfold
