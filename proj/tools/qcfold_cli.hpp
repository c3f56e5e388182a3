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

#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "qcfold/qcfold.hpp"

namespace qcfold::cli {

namespace fs = std::filesystem;

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitDomain = 3;
inline constexpr int kExitCapacity = 4;

inline int exit_code(const Error &e) {
    switch (e.category()) {
        case ErrorCategory::Config:
            return kExitConfig;
        case ErrorCategory::Capacity:
            return kExitCapacity;
        case ErrorCategory::Domain:
            return kExitDomain;
    }
    return kExitDomain;
}

struct ProblemSettings {
    std::optional<std::string> sequence;
    std::optional<std::string> sequence_file;
    std::optional<std::string> energy_table;
    std::optional<std::string> ising_file;
    std::optional<std::string> qubo_file;
    std::size_t min_loop = kDefaultMinLoop;
    QuboCoefficients coeffs;
    bool reduce = false;
};

struct IqpSettings {
    std::size_t n_iter = 0;
    std::size_t bitstrings = std::size_t{1} << 15;
    IqpEvaluator evaluator = IqpEvaluator::MonteCarlo;
    std::uint64_t shots = std::uint64_t{1} << 15;
    double z_th = 0.99;
    std::string layout = "heavy_hex_tube";
    std::vector<Edge> edges;
    bool singles = true;
};

struct SweepSettings {
    std::vector<std::size_t> sizes;
    std::vector<std::string> sequences;
    std::vector<double> reference_energies;
    std::uint64_t instance_seed = 1;
};

struct Config {
    ProblemSettings problem;
    VqaConfig vqa;
    IqpSettings iqp;
    ReadoutNoise noise;
    std::size_t runs = 1;
    std::optional<double> reference_energy;
    SweepSettings sweep;
    std::uint64_t seed = 0;
};

namespace detail {

inline void check_keys(const Json &section, const std::string &name, std::initializer_list<const char *> allowed) {
    if (!section.is_object()) {
        throw Error(ErrorKind::Parse, "config section '" + name + "' must be an object");
    }
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto &[key, value] : section.items()) {
        if (!ok.count(key)) {
            throw Error(ErrorKind::Parse, "unknown config key '" + name + "." + key + "'");
        }
    }
}

template <class T>
void read(const Json &section, const char *key, T &target, const std::string &name) {
    if (!section.contains(key) || section.at(key).is_null()) {
        return;
    }
    try {
        target = section.at(key).get<T>();
    } catch (const nlohmann::json::exception &) {
        throw Error(ErrorKind::Parse, "config key '" + name + "." + key + "' has the wrong type");
    }
}

template <class T>
void read(const Json &section, const char *key, std::optional<T> &target, const std::string &name) {
    if (!section.contains(key) || section.at(key).is_null()) {
        return;
    }
    T value{};
    read(section, key, value, name);
    target = value;
}

inline ReadoutNoise::Rates read_rates(const Json &j, const std::string &name) {
    check_keys(j, name, {"p01", "p10"});
    ReadoutNoise::Rates r;
    read(j, "p01", r.p01, name);
    read(j, "p10", r.p10, name);
    return r;
}

}  // namespace detail

/// Parses the JSON experiment file. Unknown keys and out-of-range values are
/// configuration errors.
inline Config parse_config(const Json &root) {
    using detail::read;
    Config cfg;
    detail::check_keys(root, "<root>", {"problem", "vqa", "iqp", "noise", "experiment", "sweep", "seed"});
    read(root, "seed", cfg.seed, "<root>");
    if (root.contains("problem")) {
        const auto &s = root.at("problem");
        detail::check_keys(s, "problem",
                           {"sequence", "sequence_file", "energy_table", "ising", "qubo", "min_loop", "r", "p", "t",
                            "ua_penalty", "reduce"});
        auto &p = cfg.problem;
        read(s, "sequence", p.sequence, "problem");
        read(s, "sequence_file", p.sequence_file, "problem");
        read(s, "energy_table", p.energy_table, "problem");
        read(s, "ising", p.ising_file, "problem");
        read(s, "qubo", p.qubo_file, "problem");
        read(s, "min_loop", p.min_loop, "problem");
        read(s, "r", p.coeffs.r, "problem");
        read(s, "p", p.coeffs.p, "problem");
        read(s, "t", p.coeffs.t, "problem");
        read(s, "ua_penalty", p.coeffs.ua_penalty, "problem");
        read(s, "reduce", p.reduce, "problem");
        if (p.coeffs.t && !(*p.coeffs.t > 0.0)) {
            throw Error(ErrorKind::Parse, "problem.t must be positive");
        }
        if (p.coeffs.p < 0.0) {
            throw Error(ErrorKind::Parse, "problem.p must be nonnegative");
        }
    }
    if (root.contains("vqa")) {
        const auto &s = root.at("vqa");
        detail::check_keys(s, "vqa",
                           {"alpha", "theta_th", "p_th", "f", "shots", "layers", "epochs", "n_iter", "restart",
                            "layerwise"});
        auto &v = cfg.vqa;
        read(s, "alpha", v.alpha, "vqa");
        read(s, "theta_th", v.theta_th, "vqa");
        read(s, "p_th", v.p_th, "vqa");
        read(s, "f", v.f, "vqa");
        read(s, "shots", v.n_shots, "vqa");
        read(s, "layers", v.layers, "vqa");
        read(s, "epochs", v.epochs, "vqa");
        read(s, "n_iter", v.n_iter, "vqa");
        read(s, "layerwise", v.layerwise, "vqa");
        std::string restart = "best";
        read(s, "restart", restart, "vqa");
        if (restart == "best") {
            v.restart_mode = RestartMode::Best;
        } else if (restart == "last") {
            v.restart_mode = RestartMode::Last;
        } else {
            throw Error(ErrorKind::Parse, "vqa.restart must be \"best\" or \"last\"");
        }
    }
    try {
        cfg.vqa.validate();
    } catch (const Error &e) {
        throw Error(ErrorKind::Parse, std::string("vqa: ") + e.what());
    }
    if (root.contains("iqp")) {
        const auto &s = root.at("iqp");
        detail::check_keys(s, "iqp",
                           {"n_iter", "bitstrings", "evaluator", "shots", "z_th", "layout", "edges", "singles"});
        auto &q = cfg.iqp;
        read(s, "n_iter", q.n_iter, "iqp");
        read(s, "bitstrings", q.bitstrings, "iqp");
        read(s, "shots", q.shots, "iqp");
        read(s, "z_th", q.z_th, "iqp");
        read(s, "layout", q.layout, "iqp");
        read(s, "singles", q.singles, "iqp");
        std::vector<std::array<std::size_t, 2>> edges;
        read(s, "edges", edges, "iqp");
        for (auto [a, b] : edges) {
            q.edges.emplace_back(a, b);
        }
        std::string evaluator = "monte_carlo";
        read(s, "evaluator", evaluator, "iqp");
        if (evaluator == "monte_carlo") {
            q.evaluator = IqpEvaluator::MonteCarlo;
        } else if (evaluator == "exact") {
            q.evaluator = IqpEvaluator::Exact;
        } else {
            throw Error(ErrorKind::Parse, "iqp.evaluator must be \"monte_carlo\" or \"exact\"");
        }
        static const std::set<std::string> layouts{"heavy_hex_tube", "line", "problem", "edges"};
        if (!layouts.count(q.layout)) {
            throw Error(ErrorKind::Parse, "iqp.layout must be one of heavy_hex_tube, line, problem, edges");
        }
        if (q.bitstrings == 0 || q.shots == 0) {
            throw Error(ErrorKind::Parse, "iqp.bitstrings and iqp.shots must be positive");
        }
        if (!(q.z_th >= 0.0 && q.z_th <= 1.0)) {
            throw Error(ErrorKind::Parse, "iqp.z_th must lie in [0, 1]");
        }
    }
    if (root.contains("noise")) {
        const auto &s = root.at("noise");
        detail::check_keys(s, "noise", {"p01", "p10", "overrides"});
        detail::read(s, "p01", cfg.noise.global.p01, "noise");
        detail::read(s, "p10", cfg.noise.global.p10, "noise");
        if (s.contains("overrides")) {
            for (const auto &[key, value] : s.at("overrides").items()) {
                cfg.noise.overrides[qcfold::detail::parse_index(key, "noise override")] =
                    detail::read_rates(value, "noise.overrides." + key);
            }
        }
        try {
            cfg.noise.validate();
        } catch (const Error &e) {
            throw Error(ErrorKind::Parse, std::string("noise: ") + e.what());
        }
    }
    if (root.contains("experiment")) {
        const auto &s = root.at("experiment");
        detail::check_keys(s, "experiment", {"runs", "reference_energy"});
        read(s, "runs", cfg.runs, "experiment");
        read(s, "reference_energy", cfg.reference_energy, "experiment");
        if (cfg.runs == 0) {
            throw Error(ErrorKind::Parse, "experiment.runs must be at least 1");
        }
    }
    if (root.contains("sweep")) {
        const auto &s = root.at("sweep");
        detail::check_keys(s, "sweep", {"sizes", "sequences", "reference_energies", "instance_seed"});
        read(s, "sizes", cfg.sweep.sizes, "sweep");
        read(s, "sequences", cfg.sweep.sequences, "sweep");
        read(s, "reference_energies", cfg.sweep.reference_energies, "sweep");
        read(s, "instance_seed", cfg.sweep.instance_seed, "sweep");
    }
    return cfg;
}

inline Config load_config(const std::string &path) {
    if (path.empty()) {
        return parse_config(Json::object());
    }
    return parse_config(read_json_file(path));
}

struct Problem {
    std::optional<QuboProblem> qubo;
    IsingHamiltonian H;
    std::string label;
};

inline StackEnergyTable load_table(const ProblemSettings &p) {
    return p.energy_table ? StackEnergyTable::load(*p.energy_table) : StackEnergyTable::nearest_neighbor_default();
}

inline Problem problem_from_sequence(const Sequence &seq, const ProblemSettings &p) {
    Problem out;
    auto quartets = enumerate_quartets(seq, p.min_loop, load_table(p));
    if (quartets.empty()) {
        throw Error(ErrorKind::InvalidArgument, "empty problem: sequence " + seq.str() + " admits no quartets");
    }
    out.qubo = assemble_qubo(quartets, p.coeffs);
    out.H = qubo_to_ising(*out.qubo);
    out.label = seq.str();
    return out;
}

inline Problem load_problem(const ProblemSettings &p) {
    if (p.ising_file) {
        Problem out;
        out.H = ising_from_json(read_json_file(*p.ising_file));
        out.label = *p.ising_file;
        return out;
    }
    if (p.qubo_file) {
        Problem out;
        out.qubo = qubo_from_json(read_json_file(*p.qubo_file));
        out.H = qubo_to_ising(*out.qubo);
        out.label = *p.qubo_file;
        return out;
    }
    if (p.sequence) {
        return problem_from_sequence(parse_sequence(*p.sequence), p);
    }
    if (p.sequence_file) {
        auto seqs = read_sequence_file(*p.sequence_file);
        if (seqs.empty()) {
            throw Error(ErrorKind::Parse, "sequence file " + *p.sequence_file + " holds no sequence");
        }
        return problem_from_sequence(seqs.front(), p);
    }
    throw Error(ErrorKind::Parse, "no problem given: set problem.sequence, sequence_file, qubo or ising");
}

inline std::string fmt_double(double v) {
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v == 0.0 ? 0.0 : v);
    return buf;
}

inline void write_text(const fs::path &path, const std::string &text) {
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorKind::Parse, "cannot write " + path.string());
    }
    out << text;
}

/// Runs fn(0..count-1) on up to `workers` threads. Results are stored by index
/// by the caller, so the outcome does not depend on scheduling.
template <class Fn>
void parallel_for(std::size_t count, unsigned workers, Fn &&fn) {
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
    if (workers == 1) {
        for (std::size_t k = 0; k < count; ++k) {
            fn(k);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t k = next++; k < count; k = next++) {
                try {
                    fn(k);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) {
                        failure = std::current_exception();
                    }
                }
            }
        });
    }
    for (auto &t : pool) {
        t.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

inline std::optional<double> reference_for(const IsingHamiltonian &H, std::optional<double> given) {
    if (given) {
        return given;
    }
    if (H.size() <= kMaxBruteForceQubits) {
        return brute_force_solve(H).energy;
    }
    return std::nullopt;
}

struct RunOutcome {
    std::size_t run = 0;
    std::uint64_t seed = 0;
    VqaResult vqa;
    Bitstring best_bits;  ///< original variables
    double best_energy = 0.0;
    Bitstring raw_bits;
    double raw_energy = 0.0;
    std::optional<bool> hit, raw_hit;
    std::optional<double> gamma, raw_gamma;
    double wall_time = 0.0;
};

/// One CVaR run, optionally on the reduced problem with recombination.
inline RunOutcome cvar_run(const Problem &problem, const Config &cfg, std::size_t run,
                           std::optional<double> reference) {
    RunOutcome out;
    out.run = run;
    out.seed = derive_seed(cfg.seed, run);
    const auto start = std::chrono::steady_clock::now();
    VqaConfig vc = cfg.vqa;
    vc.seed = out.seed;

    std::optional<ReductionResult> red;
    IsingHamiltonian H = problem.H;
    if (cfg.problem.reduce) {
        if (!problem.qubo) {
            throw Error(ErrorKind::Parse, "problem.reduce needs a QUBO input (sequence or qubo file)");
        }
        red = reduce_qubo(*problem.qubo);
        H = qubo_to_ising(red->reduced);
    }
    auto lift = [&](const Bitstring &x) { return red ? recombine_solution(*red, x, *problem.qubo) : x; };

    if (H.size() == 0) {
        out.best_bits = lift({});
        out.raw_bits = out.best_bits;
    } else {
        MpsSampler<> mps;
        std::optional<NoisySampler> noisy;
        CircuitSampler *sampler = &mps;
        if (!cfg.noise.is_zero()) {
            noisy.emplace(mps, cfg.noise);
            sampler = &*noisy;
        }
        out.vqa = run_vqa(H, vc, *sampler);
        out.best_bits = lift(out.vqa.best_bitstring);
        out.raw_bits = lift(out.vqa.raw_best_bitstring);
    }
    out.best_energy = energy(problem.H, out.best_bits);
    out.raw_energy = energy(problem.H, out.raw_bits);
    if (reference) {
        out.hit = matches_reference(out.best_energy, *reference, problem.H);
        out.raw_hit = matches_reference(out.raw_energy, *reference, problem.H);
        out.gamma = *out.hit ? 0.0 : relative_error_percent(out.best_energy, *reference);
        out.raw_gamma = *out.raw_hit ? 0.0 : relative_error_percent(out.raw_energy, *reference);
    }
    out.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

inline std::string opt_bool(const std::optional<bool> &v) { return v ? (*v ? "1" : "0") : ""; }
inline std::string opt_double(const std::optional<double> &v) { return v ? fmt_double(*v) : ""; }

inline std::string summary_header(bool with_instance) {
    return std::string(with_instance ? "instance," : "") +
           "run,seed,hit,gamma,best_energy,raw_hit,raw_gamma,raw_best_energy,best_bitstring\n";
}

inline std::string summary_row(const RunOutcome &o, std::optional<std::size_t> instance = std::nullopt) {
    std::ostringstream s;
    if (instance) {
        s << *instance << ',';
    }
    s << o.run << ',' << o.seed << ',' << opt_bool(o.hit) << ',' << opt_double(o.gamma) << ','
      << fmt_double(o.best_energy) << ',' << opt_bool(o.raw_hit) << ',' << opt_double(o.raw_gamma) << ','
      << fmt_double(o.raw_energy) << ',' << to_string(o.best_bits) << '\n';
    return s.str();
}

inline std::string timing_row(const RunOutcome &o, std::optional<std::size_t> instance = std::nullopt) {
    std::ostringstream s;
    if (instance) {
        s << *instance << ',';
    }
    s << o.run << ',' << fmt_double(o.wall_time) << '\n';
    return s.str();
}

inline std::string trace_jsonl(const RunOutcome &o) {
    std::ostringstream s;
    write_jsonl(s, std::span<const TraceRecord>(o.vqa.trace));
    return s.str();
}

inline std::string run_file_name(std::size_t run) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "run_%04zu.jsonl", run);
    return buf;
}

struct Globals {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out = ".";
    unsigned workers = 1;
};

inline Config effective_config(const Globals &g) {
    Config cfg = load_config(g.config);
    if (g.seed) {
        cfg.seed = *g.seed;
    }
    return cfg;
}

inline int cmd_build(const Globals &g, const std::optional<std::string> &sequence, std::ostream &out) {
    Config cfg = effective_config(g);
    if (sequence) {
        cfg.problem.sequence = sequence;
        cfg.problem.sequence_file.reset();
        cfg.problem.qubo_file.reset();
        cfg.problem.ising_file.reset();
    }
    if (!cfg.problem.sequence && !cfg.problem.sequence_file) {
        throw Error(ErrorKind::Parse, "build needs a sequence (--sequence or problem.sequence / sequence_file)");
    }
    auto problem = load_problem(cfg.problem);
    const fs::path dir(g.out);
    write_text(dir / "qubo.json", to_json(*problem.qubo).dump(2) + "\n");
    write_text(dir / "ising.json", to_json(problem.H).dump(2) + "\n");
    out << "sequence " << problem.label << "\n";
    out << "n_vars " << problem.qubo->n_vars() << "\n";
    out << "edge_density " << fmt_double(problem.qubo->edge_density()) << "\n";
    out << "t " << fmt_double(problem.qubo->t) << "\n";
    return kExitOk;
}

inline int cmd_solve_exact(const Globals &g, const std::optional<std::string> &input, std::ostream &out) {
    Config cfg = effective_config(g);
    if (input) {
        cfg.problem = {};
        cfg.problem.ising_file = input;
    }
    auto problem = load_problem(cfg.problem);
    auto sol = brute_force_solve(problem.H);
    Json j;
    j["n_vars"] = problem.H.size();
    j["bits"] = to_string(sol.bits);
    j["energy"] = sol.energy;
    write_text(fs::path(g.out) / "solution.json", j.dump(2) + "\n");
    out << "bits " << (sol.bits.empty() ? "-" : to_string(sol.bits)) << "\n";
    out << "energy " << fmt_double(sol.energy) << "\n";
    return kExitOk;
}

inline int cmd_run_cvar(const Globals &g, std::ostream &out) {
    Config cfg = effective_config(g);
    auto problem = load_problem(cfg.problem);
    auto reference = reference_for(problem.H, cfg.reference_energy);
    std::vector<RunOutcome> results(cfg.runs);
    parallel_for(cfg.runs, g.workers, [&](std::size_t r) { results[r] = cvar_run(problem, cfg, r, reference); });

    const fs::path dir(g.out);
    std::string summary = summary_header(false), timings = "run,wall_time\n";
    std::size_t hits = 0, raw_hits = 0;
    for (const auto &o : results) {
        summary += summary_row(o);
        timings += timing_row(o);
        write_text(dir / "traces" / run_file_name(o.run), trace_jsonl(o));
        hits += o.hit.value_or(false);
        raw_hits += o.raw_hit.value_or(false);
    }
    write_text(dir / "summary.csv", summary);
    write_text(dir / "timings.csv", timings);
    out << "n_vars " << problem.H.size() << "\n";
    out << "runs " << cfg.runs << "\n";
    if (reference) {
        out << "reference " << fmt_double(*reference) << "\n";
        out << "hits " << hits << "\nraw_hits " << raw_hits << "\n";
    }
    const auto best = std::min_element(results.begin(), results.end(), [](const auto &a, const auto &b) {
        return a.best_energy < b.best_energy;
    });
    out << "best_energy " << fmt_double(best->best_energy) << "\n";
    return kExitOk;
}

inline std::vector<Edge> iqp_edges(const IsingHamiltonian &H, const IqpSettings &s) {
    const std::size_t n = H.size();
    if (s.layout == "heavy_hex_tube") {
        return heavy_hex_tube_edges(n);
    }
    if (s.layout == "line") {
        std::vector<Edge> e;
        for (std::size_t q = 0; q + 1 < n; ++q) {
            e.emplace_back(q, q + 1);
        }
        return e;
    }
    if (s.layout == "problem") {
        std::vector<Edge> e;
        for (const auto &c : H.couplings()) {
            e.emplace_back(c.i, c.j);
        }
        return e;
    }
    for (auto [a, b] : s.edges) {
        if (a >= n || b >= n || a == b) {
            throw Error(ErrorKind::Parse, "iqp.edges entry out of range");
        }
    }
    return s.edges;
}

inline int cmd_run_iqp(const Globals &g, std::ostream &out) {
    Config cfg = effective_config(g);
    auto problem = load_problem(cfg.problem);
    const auto &H = problem.H;
    const std::size_t n = H.size();
    if (n > kMaxIqpExactQubits) {
        throw Error(ErrorKind::TooLarge, "IQP sampling is exact and limited to " +
                                             std::to_string(kMaxIqpExactQubits) + " qubits, got " + std::to_string(n));
    }
    auto edges = iqp_edges(H, cfg.iqp);
    auto circuit = IqpCircuit::from_edges(n, edges, cfg.iqp.singles, cfg.iqp.layout);
    IqpTrainConfig tc;
    tc.n_iter = cfg.iqp.n_iter;
    tc.n_bitstrings = cfg.iqp.bitstrings;
    tc.evaluator = cfg.iqp.evaluator;
    tc.seed = derive_seed(cfg.seed, 0);
    auto trained = train_iqp(H, circuit, tc);
    auto final_circuit = circuit.with_thetas(trained.theta);

    auto raw = exact_sample(final_circuit, cfg.iqp.shots, derive_seed(cfg.seed, 1));
    if (!cfg.noise.is_zero()) {
        raw = apply_noise(raw, cfg.noise, derive_seed(cfg.seed, 2));
    }
    raw.score(H);
    auto singles = single_qubit_expectations(final_circuit);
    auto mitigated = mitigate_samples(raw, singles, cfg.iqp.z_th);
    mitigated.score(H);
    auto post = local_search_samples(mitigated, H, derive_seed(cfg.seed, 3));

    const fs::path dir(g.out);
    std::ostringstream trace;
    for (std::size_t k = 0; k < trained.trace.size(); ++k) {
        Json j;
        j["iter"] = k;
        j["expectation"] = trained.trace[k];
        trace << j.dump() << '\n';
    }
    write_text(dir / "iqp_trace.jsonl", trace.str());
    write_text(dir / "circuit.json", to_json(final_circuit).dump(2) + "\n");
    auto dump = [](const SampleSet &s) {
        std::ostringstream o;
        write_jsonl(o, s);
        return o.str();
    };
    write_text(dir / "samples_raw.jsonl", dump(raw));
    write_text(dir / "samples_mitigated.jsonl", dump(mitigated));
    write_text(dir / "samples_post.jsonl", dump(post));

    auto reference = reference_for(H, cfg.reference_energy);
    Json summary;
    summary["n_vars"] = n;
    summary["gates"] = final_circuit.gates().size();
    summary["final_expectation"] = trained.trace.back();
    summary["raw_best_energy"] = raw.best().energy;
    summary["raw_mean_energy"] = raw.mean_energy();
    summary["mitigated_best_energy"] = mitigated.best().energy;
    summary["mitigated_mean_energy"] = mitigated.mean_energy();
    summary["post_best_energy"] = post.best().energy;
    summary["post_best_bitstring"] = to_string(post.best().bits);
    if (reference) {
        summary["reference_energy"] = *reference;
        summary["hit"] = matches_reference(post.best().energy, *reference, H);
        summary["gamma"] = relative_error_percent(post.best().energy, *reference);
    }
    write_text(dir / "iqp_summary.json", summary.dump(2) + "\n");
    out << "n_vars " << n << "\n";
    out << "final_expectation " << fmt_double(trained.trace.back()) << "\n";
    out << "raw_best_energy " << fmt_double(raw.best().energy) << "\n";
    out << "mitigated_best_energy " << fmt_double(mitigated.best().energy) << "\n";
    out << "post_best_energy " << fmt_double(post.best().energy) << "\n";
    if (reference) {
        out << "reference " << fmt_double(*reference) << "\n";
    }
    return kExitOk;
}

inline int cmd_reduce(const Globals &g, std::ostream &out) {
    Config cfg = effective_config(g);
    auto problem = load_problem(cfg.problem);
    if (!problem.qubo) {
        throw Error(ErrorKind::Parse, "reduce needs a QUBO input (sequence or qubo file)");
    }
    auto red = reduce_qubo(*problem.qubo);
    Json j = to_json(red.reduced);
    j["kappa"] = red.kappa;
    j["back_map"] = red.back_map;
    write_text(fs::path(g.out) / "reduced.json", j.dump(2) + "\n");
    out << "n_vars " << problem.qubo->n_vars() << "\n";
    out << "kappa " << red.kappa.size() << "\n";
    out << "reduced_n_vars " << red.reduced.n_vars() << "\n";
    if (red.reduced.n_vars() <= kMaxBruteForceQubits) {
        auto Hr = qubo_to_ising(red.reduced);
        auto x_red = red.reduced.n_vars() > 0 ? brute_force_solve(Hr).bits : Bitstring{};
        auto x = recombine_solution(red, x_red, *problem.qubo);
        Json s;
        s["bits"] = to_string(x);
        s["energy"] = energy(problem.H, x);
        out << "recombined_bits " << to_string(x) << "\n";
        out << "recombined_energy " << fmt_double(energy(problem.H, x)) << "\n";
        if (problem.H.size() <= kMaxBruteForceQubits) {
            auto full = brute_force_solve(problem.H);
            const bool same = matches_reference(energy(problem.H, x), full.energy, problem.H);
            s["full_energy"] = full.energy;
            s["matches_full"] = same;
            out << "full_energy " << fmt_double(full.energy) << "\n";
            out << "matches_full " << (same ? "true" : "false") << "\n";
        }
        write_text(fs::path(g.out) / "reduced_solution.json", s.dump(2) + "\n");
    }
    return kExitOk;
}

inline int cmd_sweep(const Globals &g, std::ostream &out) {
    Config cfg = effective_config(g);
    std::vector<Problem> problems;
    for (const auto &text : cfg.sweep.sequences) {
        problems.push_back(problem_from_sequence(parse_sequence(text), cfg.problem));
    }
    for (std::size_t k = 0; k < cfg.sweep.sizes.size(); ++k) {
        const auto size = cfg.sweep.sizes[k];
        auto inst = generate_mrna_instance(size, size, derive_seed(cfg.sweep.instance_seed, k), size,
                                           std::max<std::size_t>(size + 8, 3 * size), load_table(cfg.problem),
                                           cfg.problem.coeffs, cfg.problem.min_loop);
        problems.push_back(problem_from_sequence(inst.sequence, cfg.problem));
    }
    if (problems.empty()) {
        throw Error(ErrorKind::Parse, "sweep needs sweep.sequences or sweep.sizes");
    }
    if (!cfg.sweep.reference_energies.empty() && cfg.sweep.reference_energies.size() != problems.size()) {
        throw Error(ErrorKind::Parse, "sweep.reference_energies must list one value per instance");
    }
    const fs::path dir(g.out);
    std::string summary = summary_header(true), timings = "instance,run,wall_time\n";
    std::string table = "instance,qubits,runs,raw_hits,raw_gamma,hits,gamma\n";
    out << "qubits  raw_hits  raw_gamma  hits  gamma\n";
    for (std::size_t k = 0; k < problems.size(); ++k) {
        const auto &problem = problems[k];
        std::optional<double> given;
        if (!cfg.sweep.reference_energies.empty()) {
            given = cfg.sweep.reference_energies[k];
        }
        auto reference = reference_for(problem.H, given);
        Config run_cfg = cfg;
        run_cfg.seed = derive_seed(cfg.seed, 1000 + k);
        std::vector<RunOutcome> results(cfg.runs);
        parallel_for(cfg.runs, g.workers,
                     [&](std::size_t r) { results[r] = cvar_run(problem, run_cfg, r, reference); });
        std::size_t hits = 0, raw_hits = 0;
        double gamma = std::numeric_limits<double>::infinity(), raw_gamma = gamma;
        for (const auto &o : results) {
            summary += summary_row(o, k);
            timings += timing_row(o, k);
            write_text(dir / "traces" / ("instance_" + std::to_string(k)) / run_file_name(o.run), trace_jsonl(o));
            hits += o.hit.value_or(false);
            raw_hits += o.raw_hit.value_or(false);
            if (o.gamma) {
                gamma = std::min(gamma, *o.gamma);
                raw_gamma = std::min(raw_gamma, *o.raw_gamma);
            }
        }
        // Relative error is reported only where the optimum was never found.
        const std::string raw_g = reference && raw_hits == 0 ? fmt_double(raw_gamma) : "";
        const std::string g_txt = reference && hits == 0 ? fmt_double(gamma) : "";
        const std::string raw_h = reference ? std::to_string(raw_hits) : "";
        const std::string h = reference ? std::to_string(hits) : "";
        table += std::to_string(k) + "," + std::to_string(problem.H.size()) + "," + std::to_string(cfg.runs) + "," +
                 raw_h + "," + raw_g + "," + h + "," + g_txt + "\n";
        char line[160];
        std::snprintf(line, sizeof line, "%-7zu %-9s %-10s %-5s %s\n", problem.H.size(), raw_h.c_str(),
                      raw_g.empty() ? "-" : (raw_g + "%").c_str(), h.c_str(),
                      g_txt.empty() ? "-" : (g_txt + "%").c_str());
        out << line;
    }
    write_text(dir / "summary.csv", summary);
    write_text(dir / "timings.csv", timings);
    write_text(dir / "table.csv", table);
    return kExitOk;
}

inline std::vector<std::string> split_csv(const std::string &line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream s(line);
    while (std::getline(s, cell, ',')) {
        out.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') {
        out.emplace_back();
    }
    return out;
}

/// Turns a run-cvar or sweep output directory into plot-ready CSV files.
inline int cmd_report(const Globals &g, const std::string &input, std::ostream &out) {
    const fs::path in_dir(input);
    const fs::path summary_path = in_dir / "summary.csv";
    std::ifstream summary(summary_path);
    if (!summary) {
        throw Error(ErrorKind::Parse, "cannot open " + summary_path.string());
    }
    std::string header;
    std::getline(summary, header);
    const auto columns = split_csv(header);
    auto column = [&](const std::string &name) -> std::ptrdiff_t {
        auto it = std::find(columns.begin(), columns.end(), name);
        return it == columns.end() ? -1 : it - columns.begin();
    };
    const auto c_instance = column("instance"), c_run = column("run"), c_hit = column("hit"),
               c_raw = column("raw_hit"), c_best = column("best_energy"), c_raw_best = column("raw_best_energy");
    if (c_run < 0 || c_hit < 0 || c_raw < 0 || c_best < 0 || c_raw_best < 0) {
        throw Error(ErrorKind::Parse, summary_path.string() + ": unexpected header");
    }
    std::string energies = "instance,run,raw_best_energy,best_energy,raw_hit,hit\n";
    std::map<std::string, std::pair<std::size_t, std::size_t>> tallies;
    std::map<std::string, std::size_t> run_counts;
    std::string line;
    std::size_t line_no = 1;
    while (std::getline(summary, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        auto cells = split_csv(line);
        if (cells.size() != columns.size()) {
            throw Error(ErrorKind::Parse, summary_path.string() + ":" + std::to_string(line_no) + ": bad row");
        }
        const std::string inst = c_instance >= 0 ? cells[c_instance] : "0";
        energies += inst + "," + cells[c_run] + "," + cells[c_raw_best] + "," + cells[c_best] + "," + cells[c_raw] +
                    "," + cells[c_hit] + "\n";
        auto &t = tallies[inst];
        t.first += cells[c_raw] == "1";
        t.second += cells[c_hit] == "1";
        ++run_counts[inst];
    }
    std::string hits = "instance,runs,raw_hits,hits\n";
    for (const auto &[inst, t] : tallies) {
        hits += inst + "," + std::to_string(run_counts[inst]) + "," + std::to_string(t.first) + "," +
                std::to_string(t.second) + "\n";
    }

    std::string traces = "instance,run,iter,param_index,cvar,best_energy_so_far\n";
    const fs::path trace_root = in_dir / "traces";
    if (fs::exists(trace_root)) {
        std::vector<std::pair<std::string, fs::path>> files;
        for (const auto &entry : fs::recursive_directory_iterator(trace_root)) {
            if (entry.is_regular_file() && entry.path().extension() == ".jsonl") {
                const auto parent = entry.path().parent_path().filename().string();
                const std::string inst =
                    parent.rfind("instance_", 0) == 0 ? parent.substr(std::string("instance_").size()) : "0";
                files.emplace_back(inst, entry.path());
            }
        }
        std::sort(files.begin(), files.end());
        for (const auto &[inst, path] : files) {
            const std::string stem = path.stem().string();
            const std::string run = std::to_string(std::stoul(stem.substr(stem.find('_') + 1)));
            std::ifstream tf(path);
            std::string rec;
            while (std::getline(tf, rec)) {
                if (rec.empty()) {
                    continue;
                }
                auto j = Json::parse(rec);
                traces += inst + "," + run + "," + std::to_string(j.at("iter").get<std::size_t>()) + "," +
                          std::to_string(j.at("param_index").get<std::size_t>()) + "," +
                          fmt_double(j.at("cvar").get<double>()) + "," +
                          fmt_double(j.at("best_energy_so_far").get<double>()) + "\n";
            }
        }
    }
    const fs::path dir(g.out);
    write_text(dir / "report_hits.csv", hits);
    write_text(dir / "report_energies.csv", energies);
    write_text(dir / "report_traces.csv", traces);
    out << "instances " << tallies.size() << "\n";
    for (const auto &[inst, t] : tallies) {
        out << "instance " << inst << " runs " << run_counts[inst] << " raw_hits " << t.first << " hits " << t.second
            << "\n";
    }
    return kExitOk;
}

/// Entry point shared by the executable and the tests.
inline int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"qcfold: RNA folding QUBOs, CVaR and IQP sampling experiments"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--config", g.config, "experiment config (JSON)");
    app.add_option("--seed", g.seed, "base seed");
    app.add_option("--out", g.out, "output directory");
    app.add_option("--workers", g.workers, "parallel runs")->check(CLI::PositiveNumber);

    std::optional<std::string> sequence, input;
    std::string report_input;
    auto *build = app.add_subcommand("build", "sequence -> QUBO and Ising JSON");
    build->add_option("--sequence", sequence, "sequence text (overrides the config)");
    auto *solve = app.add_subcommand("solve-exact", "exhaustive ground state of an Ising JSON");
    solve->add_option("--input", input, "Ising JSON (overrides the config)");
    auto *cvar_cmd = app.add_subcommand("run-cvar", "CVaR VQA on the MPS simulator");
    auto *iqp_cmd = app.add_subcommand("run-iqp", "train, sample, mitigate and refine an IQP circuit");
    auto *reduce = app.add_subcommand("reduce", "eliminate nonnegatively coupled variables");
    auto *sweep = app.add_subcommand("sweep", "hit-rate table over instances");
    auto *report = app.add_subcommand("report", "plot-ready CSV from a results directory");
    report->add_option("--input", report_input, "results directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfig;
    }
    try {
        if (build->parsed()) {
            return cmd_build(g, sequence, out);
        }
        if (solve->parsed()) {
            return cmd_solve_exact(g, input, out);
        }
        if (cvar_cmd->parsed()) {
            return cmd_run_cvar(g, out);
        }
        if (iqp_cmd->parsed()) {
            return cmd_run_iqp(g, out);
        }
        if (reduce->parsed()) {
            return cmd_reduce(g, out);
        }
        if (sweep->parsed()) {
            return cmd_sweep(g, out);
        }
        if (report->parsed()) {
            return cmd_report(g, report_input, out);
        }
    } catch (const Error &e) {
        err << "error: " << e.what() << "\n";
        return exit_code(e);
    } catch (const nlohmann::json::exception &e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const fs::filesystem_error &e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitConfig;
}

}  // namespace qcfold::cli
