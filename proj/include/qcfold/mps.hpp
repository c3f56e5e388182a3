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
#include <complex>
#include <random>
#include <type_traits>
#include <utility>
#include <vector>

#include "qcfold/samples.hpp"

namespace qcfold {

namespace detail {

template <class T>
struct is_complex : std::false_type {};
template <class T>
struct is_complex<std::complex<T>> : std::true_type {};

template <class Scalar>
inline Scalar conj_value(const Scalar &v) {
    if constexpr (is_complex<Scalar>::value) {
        return std::conj(v);
    } else {
        return v;
    }
}

template <class Scalar>
inline double real_value(const Scalar &v) {
    if constexpr (is_complex<Scalar>::value) {
        return v.real();
    } else {
        return static_cast<double>(v);
    }
}

template <class Scalar>
inline double abs2(const Scalar &v) {
    if constexpr (is_complex<Scalar>::value) {
        return std::norm(v);
    } else {
        return static_cast<double>(v) * static_cast<double>(v);
    }
}

}  // namespace detail

/// Rank-3 site tensor A[left][phys][right], phys in {0, 1}.
template <class Scalar>
struct SiteTensor {
    std::size_t left = 1;
    std::size_t right = 1;
    std::vector<Scalar> data = std::vector<Scalar>(2);

    SiteTensor() = default;
    SiteTensor(std::size_t l, std::size_t r) : left(l), right(r), data(l * 2 * r, Scalar{}) {}

    Scalar &operator()(std::size_t l, std::size_t s, std::size_t r) { return data[(l * 2 + s) * right + r]; }
    const Scalar &operator()(std::size_t l, std::size_t s, std::size_t r) const {
        return data[(l * 2 + s) * right + r];
    }
};

/// Rank-4 operator tensor W[left][out][in][right].
template <class Scalar>
struct MpoTensor {
    std::size_t left = 1;
    std::size_t right = 1;
    std::vector<Scalar> data = std::vector<Scalar>(4);

    MpoTensor() = default;
    MpoTensor(std::size_t l, std::size_t r) : left(l), right(r), data(l * 4 * r, Scalar{}) {}

    Scalar &operator()(std::size_t l, std::size_t o, std::size_t i, std::size_t r) {
        return data[((l * 2 + o) * 2 + i) * right + r];
    }
    const Scalar &operator()(std::size_t l, std::size_t o, std::size_t i, std::size_t r) const {
        return data[((l * 2 + o) * 2 + i) * right + r];
    }
};

template <class Scalar>
class BasicMps {
   public:
    BasicMps() = default;
    explicit BasicMps(std::vector<SiteTensor<Scalar>> sites) : sites_(std::move(sites)) {
        if (sites_.empty()) {
            throw Error(ErrorKind::InvalidArgument, "MPS needs at least one site");
        }
        if (sites_.front().left != 1 || sites_.back().right != 1) {
            throw Error(ErrorKind::SizeMismatch, "MPS boundary bonds must be 1");
        }
        for (std::size_t q = 0; q + 1 < sites_.size(); ++q) {
            if (sites_[q].right != sites_[q + 1].left) {
                throw Error(ErrorKind::SizeMismatch, "MPS bond dimension mismatch at bond " + std::to_string(q));
            }
        }
    }

    std::size_t size() const noexcept { return sites_.size(); }
    const SiteTensor<Scalar> &site(std::size_t q) const { return sites_.at(q); }
    const std::vector<SiteTensor<Scalar>> &sites() const noexcept { return sites_; }

    /// Dimension of the bond between site q and q+1, for q in [0, n-1).
    std::vector<std::size_t> bond_dimensions() const {
        std::vector<std::size_t> out;
        for (std::size_t q = 0; q + 1 < sites_.size(); ++q) {
            out.push_back(sites_[q].right);
        }
        return out;
    }

    std::size_t max_bond() const {
        std::size_t chi = 1;
        for (const auto &s : sites_) {
            chi = std::max({chi, s.left, s.right});
        }
        return chi;
    }

    /// Right environments R[q] (left_q x left_q), R[n] = [1]. R[0] is <psi|psi>.
    std::vector<std::vector<Scalar>> right_environments() const {
        const std::size_t n = sites_.size();
        std::vector<std::vector<Scalar>> env(n + 1);
        env[n] = {Scalar{1}};
        std::vector<Scalar> tmp;
        for (std::size_t q = n; q-- > 0;) {
            const auto &A = sites_[q];
            const auto &R = env[q + 1];
            const std::size_t L = A.left, Rd = A.right;
            tmp.assign(L * 2 * Rd, Scalar{});
            // tmp(l, s, r') = sum_r A(l, s, r) R(r, r')
            for (std::size_t l = 0; l < L; ++l) {
                for (std::size_t s = 0; s < 2; ++s) {
                    for (std::size_t r = 0; r < Rd; ++r) {
                        const Scalar a = A(l, s, r);
                        if (a == Scalar{}) {
                            continue;
                        }
                        for (std::size_t rp = 0; rp < Rd; ++rp) {
                            tmp[(l * 2 + s) * Rd + rp] += a * R[r * Rd + rp];
                        }
                    }
                }
            }
            auto &out = env[q];
            out.assign(L * L, Scalar{});
            for (std::size_t l = 0; l < L; ++l) {
                for (std::size_t lp = 0; lp < L; ++lp) {
                    Scalar acc{};
                    for (std::size_t s = 0; s < 2; ++s) {
                        for (std::size_t rp = 0; rp < Rd; ++rp) {
                            acc += tmp[(l * 2 + s) * Rd + rp] * detail::conj_value(A(lp, s, rp));
                        }
                    }
                    out[l * L + lp] = acc;
                }
            }
        }
        return env;
    }

    double norm() const { return std::sqrt(detail::real_value(right_environments()[0][0])); }

    Scalar amplitude(std::span<const std::uint8_t> bits) const {
        if (bits.size() != sites_.size()) {
            throw Error(ErrorKind::LengthMismatch, "bitstring length does not match MPS size");
        }
        std::vector<Scalar> v{Scalar{1}}, next;
        for (std::size_t q = 0; q < sites_.size(); ++q) {
            const auto &A = sites_[q];
            next.assign(A.right, Scalar{});
            for (std::size_t l = 0; l < A.left; ++l) {
                for (std::size_t r = 0; r < A.right; ++r) {
                    next[r] += v[l] * A(l, bits[q], r);
                }
            }
            v.swap(next);
        }
        return v[0];
    }

    /// Full state vector, index with qubit 0 as the most significant bit.
    std::vector<Scalar> dense() const {
        if (sites_.size() > 24) {
            throw Error(ErrorKind::TooLarge, "dense expansion limited to 24 sites");
        }
        // rows: (prefix index, bond index)
        std::vector<Scalar> cur{Scalar{1}}, next;
        std::size_t bond = 1;
        for (const auto &A : sites_) {
            const std::size_t prefixes = cur.size() / bond;
            next.assign(prefixes * 2 * A.right, Scalar{});
            for (std::size_t x = 0; x < prefixes; ++x) {
                for (std::size_t l = 0; l < A.left; ++l) {
                    const Scalar v = cur[x * bond + l];
                    if (v == Scalar{}) {
                        continue;
                    }
                    for (std::size_t s = 0; s < 2; ++s) {
                        for (std::size_t r = 0; r < A.right; ++r) {
                            next[((x * 2 + s) * A.right) + r] += v * A(l, s, r);
                        }
                    }
                }
            }
            cur.swap(next);
            bond = A.right;
        }
        return cur;
    }

   private:
    std::vector<SiteTensor<Scalar>> sites_;
};

template <class Scalar>
class BasicLayerMpo {
   public:
    BasicLayerMpo() = default;
    explicit BasicLayerMpo(std::vector<MpoTensor<Scalar>> sites) : sites_(std::move(sites)) {}

    std::size_t size() const noexcept { return sites_.size(); }
    const MpoTensor<Scalar> &site(std::size_t q) const { return sites_.at(q); }
    MpoTensor<Scalar> &site(std::size_t q) { return sites_.at(q); }

    std::vector<std::size_t> bond_dimensions() const {
        std::vector<std::size_t> out;
        for (std::size_t q = 0; q + 1 < sites_.size(); ++q) {
            out.push_back(sites_[q].right);
        }
        return out;
    }

    std::size_t max_bond() const {
        std::size_t d = 1;
        for (const auto &w : sites_) {
            d = std::max({d, w.left, w.right});
        }
        return d;
    }

   private:
    std::vector<MpoTensor<Scalar>> sites_;
};

using Mps = BasicMps<std::complex<double>>;
using LayerMpo = BasicLayerMpo<std::complex<double>>;

/// Ry(theta) = exp(-i theta Y / 2); Ry|0> = cos(theta/2)|0> + sin(theta/2)|1>.
inline std::array<double, 4> ry_matrix(double theta) {
    const double c = std::cos(theta / 2), s = std::sin(theta / 2);
    return {c, -s, s, c};
}

template <class Scalar = std::complex<double>>
BasicMps<Scalar> init_product_mps(std::size_t n, std::span<const double> angles) {
    if (n == 0) {
        throw Error(ErrorKind::InvalidArgument, "MPS needs at least one site");
    }
    if (angles.size() != n) {
        throw Error(ErrorKind::SizeMismatch, "need one angle per qubit");
    }
    std::vector<SiteTensor<Scalar>> sites(n, SiteTensor<Scalar>(1, 1));
    for (std::size_t q = 0; q < n; ++q) {
        sites[q](0, 0, 0) = Scalar(std::cos(angles[q] / 2));
        sites[q](0, 1, 0) = Scalar(std::sin(angles[q] / 2));
    }
    return BasicMps<Scalar>(std::move(sites));
}

enum class LinkRole : std::uint8_t { None, Left, Right };

/// Site tensor of a layer MPO: Ry(angle) applied after this site's half of a
/// CZ, using CZ = |0><0| (x) I + |1><1| (x) Z.
template <class Scalar>
MpoTensor<Scalar> layer_site_tensor(LinkRole role, double angle) {
    const auto ry = ry_matrix(angle);
    if (role == LinkRole::None) {
        MpoTensor<Scalar> w(1, 1);
        for (std::size_t o = 0; o < 2; ++o) {
            for (std::size_t i = 0; i < 2; ++i) {
                w(0, o, i, 0) = Scalar(ry[o * 2 + i]);
            }
        }
        return w;
    }
    if (role == LinkRole::Left) {
        // Ry * P_b
        MpoTensor<Scalar> w(1, 2);
        for (std::size_t b = 0; b < 2; ++b) {
            for (std::size_t o = 0; o < 2; ++o) {
                w(0, o, b, b) = Scalar(ry[o * 2 + b]);
            }
        }
        return w;
    }
    // Ry * Z^b
    MpoTensor<Scalar> w(2, 1);
    for (std::size_t b = 0; b < 2; ++b) {
        for (std::size_t o = 0; o < 2; ++o) {
            for (std::size_t i = 0; i < 2; ++i) {
                const double sign = (b == 1 && i == 1) ? -1.0 : 1.0;
                w(b, o, i, 0) = Scalar(sign * ry[o * 2 + i]);
            }
        }
    }
    return w;
}

/// Roles of each site for a set of CZ links; links must be disjoint
/// nearest-neighbour pairs (q, q+1).
inline std::vector<LinkRole> link_roles(std::size_t n, std::span<const std::pair<std::size_t, std::size_t>> links) {
    std::vector<LinkRole> roles(n, LinkRole::None);
    for (auto [a, b] : links) {
        if (a > b) {
            std::swap(a, b);
        }
        if (b >= n) {
            throw Error(ErrorKind::IndexOutOfRange, "CZ link qubit out of range");
        }
        if (b != a + 1) {
            throw Error(ErrorKind::InvalidArgument, "CZ links must join neighbouring qubits");
        }
        if (roles[a] != LinkRole::None || roles[b] != LinkRole::None) {
            throw Error(ErrorKind::OverlappingLinks,
                        "CZ links overlap at (" + std::to_string(a) + ", " + std::to_string(b) + ")");
        }
        roles[a] = LinkRole::Left;
        roles[b] = LinkRole::Right;
    }
    return roles;
}

/// One ansatz layer (CZ links, then Ry on every qubit) as an MPO. Bond
/// dimension is 2 across each link and 1 elsewhere.
template <class Scalar = std::complex<double>>
BasicLayerMpo<Scalar> layer_to_mpo(std::size_t n, std::span<const std::pair<std::size_t, std::size_t>> cz_links,
                                   std::span<const double> angles) {
    if (angles.size() != n) {
        throw Error(ErrorKind::SizeMismatch, "need one angle per qubit");
    }
    auto roles = link_roles(n, cz_links);
    std::vector<MpoTensor<Scalar>> sites;
    sites.reserve(n);
    for (std::size_t q = 0; q < n; ++q) {
        sites.push_back(layer_site_tensor<Scalar>(roles[q], angles[q]));
    }
    return BasicLayerMpo<Scalar>(std::move(sites));
}

/// Exact site-local contraction; the merged bond index is (mps bond, mpo bond).
template <class Scalar>
SiteTensor<Scalar> contract_site(const SiteTensor<Scalar> &A, const MpoTensor<Scalar> &W) {
    SiteTensor<Scalar> out(A.left * W.left, A.right * W.right);
    for (std::size_t l = 0; l < A.left; ++l) {
        for (std::size_t wl = 0; wl < W.left; ++wl) {
            for (std::size_t o = 0; o < 2; ++o) {
                for (std::size_t r = 0; r < A.right; ++r) {
                    for (std::size_t wr = 0; wr < W.right; ++wr) {
                        Scalar acc{};
                        for (std::size_t i = 0; i < 2; ++i) {
                            acc += W(wl, o, i, wr) * A(l, i, r);
                        }
                        out(l * W.left + wl, o, r * W.right + wr) = acc;
                    }
                }
            }
        }
    }
    return out;
}

template <class Scalar>
BasicMps<Scalar> contract_layer(const BasicMps<Scalar> &mps, const BasicLayerMpo<Scalar> &mpo) {
    if (mps.size() != mpo.size()) {
        throw Error(ErrorKind::SizeMismatch, "MPO and MPS site counts differ");
    }
    std::vector<SiteTensor<Scalar>> sites;
    sites.reserve(mps.size());
    for (std::size_t q = 0; q < mps.size(); ++q) {
        sites.push_back(contract_site(mps.site(q), mpo.site(q)));
    }
    return BasicMps<Scalar>(std::move(sites));
}

/// Angles of the two-local Ry/CZ ansatz: row 0 is the initial rotation layer,
/// row r >= 1 follows the r-th CZ layer.
struct AnsatzParams {
    std::size_t n = 0;
    std::size_t layers = 0;
    std::vector<double> theta;  ///< (layers + 1) x n, row-major

    AnsatzParams() = default;
    AnsatzParams(std::size_t n_qubits, std::size_t n_layers)
        : n(n_qubits), layers(n_layers), theta((n_layers + 1) * n_qubits, 0.0) {}

    std::size_t count() const noexcept { return theta.size(); }
    double &at(std::size_t layer, std::size_t qubit) { return theta.at(layer * n + qubit); }
    double at(std::size_t layer, std::size_t qubit) const { return theta.at(layer * n + qubit); }
    std::span<const double> row(std::size_t layer) const { return std::span<const double>(theta).subspan(layer * n, n); }
    std::pair<std::size_t, std::size_t> locate(std::size_t index) const { return {index / n, index % n}; }

    bool operator==(const AnsatzParams &) const = default;
};

/// Pairwise entangler: CZ on (i, i+1) for even i in odd layers and for odd i
/// in even layers.
inline std::vector<std::pair<std::size_t, std::size_t>> entangler_links(std::size_t n, std::size_t layer) {
    std::vector<std::pair<std::size_t, std::size_t>> links;
    const std::size_t start = (layer % 2 == 1) ? 0 : 1;
    for (std::size_t i = start; i + 1 < n; i += 2) {
        links.emplace_back(i, i + 1);
    }
    return links;
}

/// Exact MPS of the two-local ansatz with cached per-layer site operators.
/// Every site tensor of the state is the product of that site's tensors
/// across layers, so changing one angle touches exactly one site.
template <class Scalar = std::complex<double>>
class TwoLocalMps {
   public:
    explicit TwoLocalMps(const AnsatzParams &params) : params_(params) {
        if (params.n == 0 || params.theta.size() != (params.layers + 1) * params.n) {
            throw Error(ErrorKind::SizeMismatch, "malformed ansatz parameters");
        }
        const std::size_t n = params.n;
        roles_.resize(params.layers + 1);
        layer_tensors_.resize(params.layers + 1);
        for (std::size_t layer = 1; layer <= params.layers; ++layer) {
            auto links = entangler_links(n, layer);
            roles_[layer] = link_roles(n, links);
            layer_tensors_[layer].resize(n);
            for (std::size_t q = 0; q < n; ++q) {
                layer_tensors_[layer][q] = layer_site_tensor<Scalar>(roles_[layer][q], params.at(layer, q));
            }
        }
        std::vector<SiteTensor<Scalar>> sites(n);
        for (std::size_t q = 0; q < n; ++q) {
            sites[q] = build_site(q);
        }
        state_ = BasicMps<Scalar>(std::move(sites));
    }

    const AnsatzParams &params() const noexcept { return params_; }
    const BasicMps<Scalar> &state() const noexcept { return state_; }

    /// Replaces one angle and refreshes the affected site tensor.
    void update_parameter(std::size_t layer, std::size_t qubit, double angle) {
        if (layer > params_.layers || qubit >= params_.n) {
            throw Error(ErrorKind::IndexOutOfRange, "ansatz parameter index out of range");
        }
        if (params_.at(layer, qubit) == angle) {
            return;
        }
        params_.at(layer, qubit) = angle;
        if (layer > 0) {
            layer_tensors_[layer][qubit] = layer_site_tensor<Scalar>(roles_[layer][qubit], angle);
        }
        auto sites = state_.sites();
        sites[qubit] = build_site(qubit);
        state_ = BasicMps<Scalar>(std::move(sites));
    }

    /// Applies every angle that differs from the cached parameters.
    void set_params(const AnsatzParams &params) {
        if (params.n != params_.n || params.layers != params_.layers) {
            *this = TwoLocalMps(params);
            return;
        }
        std::vector<std::uint8_t> dirty(params_.n, 0);
        for (std::size_t k = 0; k < params.theta.size(); ++k) {
            if (params.theta[k] != params_.theta[k]) {
                auto [layer, q] = params_.locate(k);
                params_.theta[k] = params.theta[k];
                if (layer > 0) {
                    layer_tensors_[layer][q] = layer_site_tensor<Scalar>(roles_[layer][q], params.theta[k]);
                }
                dirty[q] = 1;
            }
        }
        if (std::find(dirty.begin(), dirty.end(), 1) == dirty.end()) {
            return;
        }
        auto sites = state_.sites();
        for (std::size_t q = 0; q < params_.n; ++q) {
            if (dirty[q]) {
                sites[q] = build_site(q);
            }
        }
        state_ = BasicMps<Scalar>(std::move(sites));
    }

   private:
    SiteTensor<Scalar> build_site(std::size_t q) const {
        SiteTensor<Scalar> t(1, 1);
        t(0, 0, 0) = Scalar(std::cos(params_.at(0, q) / 2));
        t(0, 1, 0) = Scalar(std::sin(params_.at(0, q) / 2));
        for (std::size_t layer = 1; layer <= params_.layers; ++layer) {
            t = contract_site(t, layer_tensors_[layer][q]);
        }
        return t;
    }

    AnsatzParams params_;
    std::vector<std::vector<LinkRole>> roles_;
    std::vector<std::vector<MpoTensor<Scalar>>> layer_tensors_;
    BasicMps<Scalar> state_;
};

/// Builds the ansatz state layer by layer through full MPO contractions.
template <class Scalar = std::complex<double>>
BasicMps<Scalar> build_ansatz_mps(const AnsatzParams &params) {
    auto mps = init_product_mps<Scalar>(params.n, params.row(0));
    for (std::size_t layer = 1; layer <= params.layers; ++layer) {
        auto links = entangler_links(params.n, layer);
        mps = contract_layer(mps, layer_to_mpo<Scalar>(params.n, links, params.row(layer)));
    }
    return mps;
}

namespace detail {

/// Qubit-by-qubit sampling from conditional single-site distributions. All
/// shots descend the same tree together: at each node the shot count is split
/// binomially between the two outcomes, which draws the same multinomial
/// histogram as sampling every shot independently.
template <class Scalar>
class TreeSampler {
   public:
    TreeSampler(const BasicMps<Scalar> &mps, std::uint64_t seed)
        : mps_(mps), env_(mps.right_environments()), rng_(seed), out_(mps.size()) {
        const std::size_t n = mps.size();
        v_.resize(n + 1);
        w0_.resize(n);
        w1_.resize(n);
        for (std::size_t q = 0; q < n; ++q) {
            v_[q].resize(mps.site(q).left);
            w0_[q].resize(mps.site(q).right);
            w1_[q].resize(mps.site(q).right);
        }
        v_[n].resize(1);
        bits_.assign(n, 0);
    }

    SampleSet run(std::uint64_t shots) {
        if (shots == 0) {
            return out_;
        }
        const double norm2 = real_value(env_[0][0]);
        if (!(norm2 > 0.0)) {
            throw Error(ErrorKind::InvalidArgument, "cannot sample from a zero state");
        }
        v_[0][0] = Scalar(1.0 / std::sqrt(norm2));
        descend(0, shots);
        return std::move(out_);
    }

   private:
    double branch_weight(std::size_t q, std::vector<Scalar> &w, std::size_t s) {
        const auto &A = mps_.site(q);
        const auto &v = v_[q];
        std::fill(w.begin(), w.end(), Scalar{});
        for (std::size_t l = 0; l < A.left; ++l) {
            const Scalar vl = v[l];
            for (std::size_t r = 0; r < A.right; ++r) {
                w[r] += vl * A(l, s, r);
            }
        }
        const auto &R = env_[q + 1];
        const std::size_t D = A.right;
        Scalar acc{};
        for (std::size_t r = 0; r < D; ++r) {
            Scalar row{};
            for (std::size_t rp = 0; rp < D; ++rp) {
                row += R[r * D + rp] * conj_value(w[rp]);
            }
            acc += w[r] * row;
        }
        return std::max(0.0, real_value(acc));
    }

    void descend(std::size_t q, std::uint64_t count) {
        const std::size_t n = mps_.size();
        if (q == n) {
            out_.push_sorted(bits_, count);
            return;
        }
        const double p0 = branch_weight(q, w0_[q], 0);
        if (count == 1) {
            // v_[q] is normalised, so p0 + p1 = 1 up to rounding.
            if (p0 > 0.0 && std::uniform_real_distribution<double>(0.0, 1.0)(rng_) < p0) {
                take(q, 0, p0, 1);
                return;
            }
            const double p1 = branch_weight(q, w1_[q], 1);
            if (p1 > 0.0) {
                take(q, 1, p1, 1);
            } else {
                take(q, 0, p0, 1);
            }
            return;
        }
        const double p1 = branch_weight(q, w1_[q], 1);
        const double total = p0 + p1;
        std::uint64_t c0 = 0;
        if (p1 <= 0.0) {
            c0 = count;
        } else if (p0 > 0.0) {
            std::binomial_distribution<std::uint64_t> split(count, p0 / total);
            c0 = split(rng_);
        }
        if (c0 > 0) {
            take(q, 0, p0, c0);
        }
        if (count > c0) {
            take(q, 1, p1, count - c0);
        }
    }

    void take(std::size_t q, std::uint8_t bit, double p, std::uint64_t count) {
        const auto &w = bit == 0 ? w0_[q] : w1_[q];
        bits_[q] = bit;
        const double scale = 1.0 / std::sqrt(p);
        for (std::size_t r = 0; r < w.size(); ++r) {
            v_[q + 1][r] = w[r] * scale;
        }
        descend(q + 1, count);
    }

    const BasicMps<Scalar> &mps_;
    std::vector<std::vector<Scalar>> env_;
    std::mt19937_64 rng_;
    std::vector<std::vector<Scalar>> v_, w0_, w1_;
    Bitstring bits_;
    SampleSet out_;
};

}  // namespace detail

/// Draws `shots` i.i.d. bitstrings from |<x|psi>|^2 / <psi|psi>.
template <class Scalar>
SampleSet sample(const BasicMps<Scalar> &mps, std::uint64_t shots, std::uint64_t seed) {
    detail::TreeSampler<Scalar> sampler(mps, seed);
    return sampler.run(shots);
}

}  // namespace qcfold
