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
#include <numbers>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "qcfold/local_search.hpp"
#include "qcfold/mps.hpp"
#include "qcfold/noise.hpp"

namespace qcfold {

enum class RestartMode { Last, Best };

struct VqaConfig {
    std::size_t n_iter = 0;  ///< total NFT iterations; 0 means epochs x trainable parameters
    double alpha = 0.2;
    double theta_th = 0.06;
    double p_th = 0.8;
    double f = 0.07;
    std::uint64_t n_shots = std::uint64_t{1} << 15;
    std::size_t layers = 2;
    std::size_t epochs = 2;
    RestartMode restart_mode = RestartMode::Best;
    bool layerwise = false;
    std::uint64_t seed = 0;

    void validate() const {
        auto fail = [](const std::string &what) { throw Error(ErrorKind::InvalidArgument, what); };
        if (!(alpha > 0.0 && alpha <= 1.0)) {
            throw Error(ErrorKind::BadAlpha, "alpha must lie in (0, 1]");
        }
        if (!(theta_th >= 0.0) || !std::isfinite(theta_th)) {
            fail("theta_th must be a nonnegative number");
        }
        if (!(p_th >= 0.0 && p_th <= 1.0)) {
            fail("p_th must lie in [0, 1]");
        }
        if (!(f > 0.0 && f < 1.0)) {
            fail("f must lie in (0, 1)");
        }
        if (n_shots == 0) {
            fail("n_shots must be at least 1");
        }
        if (layers > 4) {
            fail("at most 4 ansatz layers are supported");
        }
        if (epochs < 1) {
            fail("epochs must be at least 1");
        }
    }
};

/// Anything that can draw measurement records from the two-local ansatz.
class CircuitSampler {
   public:
    virtual ~CircuitSampler() = default;
    virtual SampleSet sample(const AnsatzParams &params, std::uint64_t shots, std::uint64_t seed) = 0;
};

/// Noiseless sampler backed by an exact MPS, updated in place as angles change.
template <class Scalar = std::complex<double>>
class MpsSampler final : public CircuitSampler {
   public:
    SampleSet sample(const AnsatzParams &params, std::uint64_t shots, std::uint64_t seed) override {
        if (!engine_) {
            engine_.emplace(params);
        } else {
            engine_->set_params(params);
        }
        return qcfold::sample(engine_->state(), shots, seed);
    }

    const TwoLocalMps<Scalar> *engine() const { return engine_ ? &*engine_ : nullptr; }

   private:
    std::optional<TwoLocalMps<Scalar>> engine_;
};

/// Applies readout noise to every record drawn from an inner sampler.
class NoisySampler final : public CircuitSampler {
   public:
    NoisySampler(CircuitSampler &inner, ReadoutNoise noise) : inner_(inner), noise_(std::move(noise)) {
        noise_.validate();
    }

    SampleSet sample(const AnsatzParams &params, std::uint64_t shots, std::uint64_t seed) override {
        return apply_noise(inner_.sample(params, shots, derive_seed(seed, 0)), noise_, derive_seed(seed, 1));
    }

   private:
    CircuitSampler &inner_;
    ReadoutNoise noise_;
};

/// pi/4 on ceil(f n) uniformly chosen qubits of the initial rotation layer.
template <class Rng>
AnsatzParams init_params(std::size_t n, std::size_t layers, double f, Rng &rng) {
    if (!(f > 0.0 && f < 1.0)) {
        throw Error(ErrorKind::InvalidArgument, "f must lie in (0, 1)");
    }
    AnsatzParams params(n, layers);
    const auto k = std::min(n, static_cast<std::size_t>(std::ceil(f * static_cast<double>(n) - 1e-9)));
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t t = 0; t < k; ++t) {
        params.at(0, order[t]) = std::numbers::pi / 4;
    }
    return params;
}

/// Flags qubits that should read 0 but whose empirical <Z> is below -p_th.
inline GaugeMask calibrate_gauge(const IsingHamiltonian &H, const SampleSet &samples, double p_th,
                                 std::span<const std::size_t> expected_zero_qubits) {
    if (samples.n_qubits() != H.size()) {
        throw Error(ErrorKind::LengthMismatch, "sample width does not match Hamiltonian size");
    }
    GaugeMask mask(H.size());
    const auto z = samples.z_expectations();
    for (auto q : expected_zero_qubits) {
        if (q >= H.size()) {
            throw Error(ErrorKind::IndexOutOfRange, "expected-zero qubit out of range");
        }
        if (z[q] < -p_th) {
            mask.set(q);
        }
    }
    return mask;
}

struct NftStep {
    double z0 = 0.0;
    double z_plus = 0.0;
    double z_minus = 0.0;
    double old_value = 0.0;
    double new_value = 0.0;
    double predicted = 0.0;  ///< fitted objective at the new value
    bool updated = false;
};

inline constexpr double kNftDegenerateAmplitude = 1e-12;

/// Wraps an angle into (-period/2, period/2].
inline double wrap_angle(double x, double period) {
    double y = std::remainder(x, period);
    if (y <= -period / 2) {
        y += period;
    }
    return y;
}

/// Sequential single-parameter update: the objective restricted to parameter
/// `index` is a cos(w u) + b sin(w u) + c. Three evaluations at u = 0 and
/// u = +-pi/(2w) fix (a, b, c); the parameter moves to the fitted minimum.
template <class Objective>
NftStep nft_step(Objective &&objective, std::vector<double> &theta, std::size_t index, double frequency = 1.0) {
    if (index >= theta.size()) {
        throw Error(ErrorKind::IndexOutOfRange, "parameter index out of range");
    }
    if (!(frequency > 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "NFT frequency must be positive");
    }
    NftStep step;
    const double theta0 = theta[index];
    const double shift = std::numbers::pi / (2 * frequency);
    step.old_value = theta0;
    step.z0 = objective(std::as_const(theta));
    theta[index] = theta0 + shift;
    step.z_plus = objective(std::as_const(theta));
    theta[index] = theta0 - shift;
    step.z_minus = objective(std::as_const(theta));
    theta[index] = theta0;

    const double c = (step.z_plus + step.z_minus) / 2;
    const double b = (step.z_plus - step.z_minus) / 2;
    const double a = step.z0 - c;
    const double amplitude = std::hypot(a, b);
    if (amplitude < kNftDegenerateAmplitude) {
        step.new_value = theta0;
        step.predicted = step.z0;
        return step;
    }
    const double u = (std::atan2(b, a) + std::numbers::pi) / frequency;
    step.new_value = wrap_angle(theta0 + u, 2 * std::numbers::pi / frequency);
    step.predicted = c - amplitude;
    step.updated = true;
    theta[index] = step.new_value;
    return step;
}

inline void threshold_params(std::span<double> theta, double theta_th) {
    for (auto &v : theta) {
        if (std::abs(v) < theta_th) {
            v = 0.0;
        }
    }
}

/// |F_low - F_0| / |F_0| in percent.
inline double relative_error_percent(double f_low, double f_0) {
    if (f_0 == 0.0) {
        return f_low == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    }
    return std::abs(f_low - f_0) / std::abs(f_0) * 100.0;
}

/// Energies this close to the reference count as finding it.
inline bool matches_reference(double energy, double reference, const IsingHamiltonian &H) {
    return std::abs(energy - reference) <= 1e-9 * (1.0 + H.coefficient_l1());
}

struct TraceRecord {
    std::size_t iter = 0;
    std::size_t param_index = 0;
    double cvar = 0.0;
    double best_energy_so_far = 0.0;
};

struct VqaResult {
    Bitstring best_bitstring;  ///< after post-processing, original frame
    double best_energy = 0.0;
    Bitstring raw_best_bitstring;  ///< lowest-energy shot ever drawn, original frame
    double raw_best_energy = 0.0;
    GaugeMask gauge_mask;
    std::vector<TraceRecord> trace;
    AnsatzParams final_params;
    AnsatzParams best_params;
    double best_objective = std::numeric_limits<double>::infinity();
    std::size_t evaluations = 0;
    std::optional<bool> hit;
    std::optional<double> gamma;
    std::optional<bool> raw_hit;
    std::optional<double> raw_gamma;
};

namespace detail {

inline AnsatzParams truncated(const AnsatzParams &params, std::size_t layers) {
    AnsatzParams out(params.n, layers);
    std::copy_n(params.theta.begin(), out.theta.size(), out.theta.begin());
    return out;
}

}  // namespace detail

/// Sampling-based CVaR optimisation of the two-local ansatz.
///
/// Iteration 0 samples the initial circuit once, calibrates the gauge mask
/// and transforms H. Each later iteration is one NFT step (three fresh sample
/// sets). Parameters are visited in a shuffled order per epoch; in layerwise
/// mode the layers are trained one stage at a time, each stage running
/// `epochs` epochs on the newest layer only. The best shot of the best
/// evaluation is refined by local search at the end.
inline VqaResult run_vqa(const IsingHamiltonian &H, const VqaConfig &config, CircuitSampler &sampler,
                         std::optional<double> reference = std::nullopt) {
    config.validate();
    const std::size_t n = H.size();
    if (n == 0) {
        throw Error(ErrorKind::InvalidArgument, "empty problem: Hamiltonian has no variables");
    }
    VqaResult result;
    std::mt19937_64 init_rng(derive_seed(config.seed, 0));
    std::mt19937_64 order_rng(derive_seed(config.seed, 1));
    const std::uint64_t sample_base = derive_seed(config.seed, 2);

    AnsatzParams params = init_params(n, config.layers, config.f, init_rng);
    std::size_t stage_layers = config.layerwise ? 0 : config.layers;

    // Iteration 0.
    SampleSet first = sampler.sample(detail::truncated(params, stage_layers), config.n_shots,
                                     derive_seed(sample_base, result.evaluations++));
    std::vector<std::size_t> expected_zero;
    for (std::size_t q = 0; q < n; ++q) {
        if (params.at(0, q) == 0.0) {
            expected_zero.push_back(q);
        }
    }
    result.gauge_mask = calibrate_gauge(H, first, config.p_th, expected_zero);
    const IsingHamiltonian Hg = gauge_transform(H, result.gauge_mask);

    result.raw_best_energy = std::numeric_limits<double>::infinity();
    SampleSet best_samples;
    auto absorb = [&](SampleSet &&s, const AnsatzParams &at) {
        s.score(Hg);
        const double value = cvar(s, config.alpha);
        const auto &top = s.best();
        if (top.energy < result.raw_best_energy) {
            result.raw_best_energy = top.energy;
            result.raw_best_bitstring = top.bits;
        }
        if (value < result.best_objective) {
            result.best_objective = value;
            result.best_params = at;
            best_samples = std::move(s);
        }
        return value;
    };
    result.trace.push_back({0, 0, absorb(std::move(first), params), 0.0});
    result.trace.back().best_energy_so_far = result.raw_best_energy;

    const std::size_t stages = config.layerwise ? config.layers + 1 : 1;
    std::size_t sweep_total = 0;
    for (std::size_t s = 0; s < stages; ++s) {
        sweep_total += config.layerwise ? n : params.count();
    }
    const std::size_t total_iters = config.n_iter > 0 ? config.n_iter : config.epochs * sweep_total;
    std::size_t iter = 0;

    for (std::size_t stage = 0; stage < stages && iter < total_iters; ++stage) {
        if (config.layerwise) {
            stage_layers = stage;
        }
        std::vector<std::size_t> active;
        const std::size_t first_row = config.layerwise ? stage : 0;
        for (std::size_t k = first_row * n; k < (stage_layers + 1) * n; ++k) {
            active.push_back(k);
        }
        const std::size_t stage_budget =
            config.n_iter > 0 ? (stage + 1 == stages ? total_iters - iter
                                                     : std::min(total_iters - iter, config.epochs * active.size()))
                              : config.epochs * active.size();
        std::size_t stage_iter = 0;
        for (std::size_t epoch = 0; stage_iter < stage_budget; ++epoch) {
            if (epoch > 0 && config.restart_mode == RestartMode::Best) {
                params = result.best_params;
            }
            std::shuffle(active.begin(), active.end(), order_rng);
            for (std::size_t k = 0; k < active.size() && stage_iter < stage_budget; ++k, ++stage_iter) {
                const std::size_t index = active[k];
                auto objective = [&](const std::vector<double> &theta) {
                    AnsatzParams at = params;
                    at.theta = theta;
                    auto samples = sampler.sample(detail::truncated(at, stage_layers), config.n_shots,
                                                  derive_seed(sample_base, result.evaluations++));
                    return absorb(std::move(samples), at);
                };
                auto step = nft_step(objective, params.theta, index);
                threshold_params(params.theta, config.theta_th);
                ++iter;
                result.trace.push_back({iter, index, step.z0, result.raw_best_energy});
            }
        }
    }
    result.final_params = params;

    // Results are reported in the original frame: x_original = x_gauged ^ m.
    auto refined = local_search_samples(best_samples, Hg, derive_seed(config.seed, 3));
    const auto &ls_best = refined.best();
    result.best_bitstring = result.raw_best_bitstring;
    result.best_energy = result.raw_best_energy;
    if (ls_best.energy < result.best_energy) {
        result.best_bitstring = ls_best.bits;
        result.best_energy = ls_best.energy;
    }
    result.raw_best_bitstring = result.gauge_mask.apply(result.raw_best_bitstring);
    result.best_bitstring = result.gauge_mask.apply(result.best_bitstring);
    result.raw_best_energy = energy(H, result.raw_best_bitstring);
    result.best_energy = energy(H, result.best_bitstring);

    if (reference) {
        result.hit = matches_reference(result.best_energy, *reference, H);
        result.raw_hit = matches_reference(result.raw_best_energy, *reference, H);
        result.gamma = *result.hit ? 0.0 : relative_error_percent(result.best_energy, *reference);
        result.raw_gamma = *result.raw_hit ? 0.0 : relative_error_percent(result.raw_best_energy, *reference);
    }
    return result;
}

}  // namespace qcfold
