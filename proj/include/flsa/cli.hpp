#pragma once

#include <chrono>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "experiments.hpp"
#include "io.hpp"
#include "simulate.hpp"
#include "solver.hpp"

namespace flsa {

// Exit codes shared by all subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitMaxIters = 2;
inline constexpr int kExitDiverged = 3;

/// Everything one CLI invocation needs. The front end fills this from flags;
/// keeping it a plain struct lets tests drive the commands without a shell.
struct RunManifest {
    // Common
    std::string input_path;
    std::string output_path;
    std::string loss_name = "quadratic";
    double huber_delta = 1.0;
    double lambda1 = 0.0;
    double lambda2 = 1.0;
    double c = 5.0;
    double tol = 1e-10;
    std::size_t max_iters = 100000;
    std::size_t inner_T = 1;
    std::string mode = "doubly";
    std::uint64_t seed = kDefaultSeed;
    bool trace = true;

    // simulate
    std::size_t n = 1000;
    std::string noise = "gaussian";
    double variance = 0.1;
    double df = 2.0;
    double scale = 0.3;
    std::size_t min_block_length = 0;

    // bench
    int experiment = 1;
    std::size_t replicates = 10;
    std::size_t bench_n = 0;  ///< 0 keeps each experiment's own default size

    AlmConfig alm_config() const {
        AlmConfig config;
        config.c = c;
        config.lambda1 = lambda1;
        config.lambda2 = lambda2;
        config.tol = tol;
        config.max_outer_iters = max_iters;
        config.inner_T = inner_T;
        config.record_traces = trace;
        if (mode == "singly") {
            config.mode = AugmentationMode::SinglyAugmented;
        } else if (mode == "doubly") {
            config.mode = AugmentationMode::DoublyAugmented;
        } else {
            throw std::invalid_argument("unknown mode '" + mode + "' (expected singly or doubly)");
        }
        return config;
    }
};

namespace detail {

inline void write_json(const std::string& path, const nlohmann::json& doc) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot open output file: " + path);
    out << doc.dump(2) << '\n';
}

}  // namespace detail

/// Solve a signal from a file. Writes `index,y,beta_hat` CSV plus a JSON
/// sidecar (<out>.json) with the run summary.
inline int cmd_solve(const RunManifest& manifest) {
    std::vector<double> y;
    LossModel loss = LossModel::quadratic();
    AlmConfig config;
    try {
        y = read_signal_file(manifest.input_path);
        if (y.size() < 2) {
            throw InputError("need at least 2 observations, got " + std::to_string(y.size()));
        }
        loss = LossModel::from_name(manifest.loss_name, manifest.huber_delta);
        config = manifest.alm_config();
        config.validate();
    } catch (const std::exception& e) {
        std::cerr << "flsa solve: " << e.what() << '\n';
        return kExitInputError;
    }

    SolveReport report;
    double wall_ms = 0.0;
    try {
        const auto start = std::chrono::steady_clock::now();
        report = solve(y, loss, config);
        wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                            start)
                      .count();
    } catch (const DivergenceError& e) {
        std::cerr << "flsa solve: " << e.what() << '\n';
        return kExitDiverged;
    } catch (const std::exception& e) {  // invalid flag combinations etc.
        std::cerr << "flsa solve: " << e.what() << '\n';
        return kExitInputError;
    }

    try {
        std::vector<double> index(y.size());
        for (std::size_t i = 0; i < index.size(); ++i) index[i] = static_cast<double>(i);
        write_csv(manifest.output_path, {"index", "y", "beta_hat"},
                  {&index, &y, &report.beta_hat});

        nlohmann::json sidecar{
            {"schema", 1},
            {"iterations", report.iterations},
            {"terminated", report.terminated == Termination::Converged ? "Converged" : "MaxIters"},
            {"final_objective", objective(report.beta_hat, y, loss, config.lambda1, config.lambda2)},
            {"final_dual_residual", report.final_dual_residual},
            {"wall_time_ms", wall_ms},
        };
        detail::write_json(manifest.output_path + ".json", sidecar);
    } catch (const std::exception& e) {
        std::cerr << "flsa solve: " << e.what() << '\n';
        return kExitInputError;
    }

    return report.terminated == Termination::Converged ? kExitOk : kExitMaxIters;
}

/// Generate a synthetic signal. Writes `truth,noisy` CSV.
inline int cmd_simulate(const RunManifest& manifest) {
    try {
        SignalSpec spec;
        spec.n = manifest.n;
        spec.seed = manifest.seed;
        spec.min_block_length = manifest.min_block_length;
        if (manifest.noise == "gaussian") {
            spec.noise = NoiseModel::gaussian(manifest.variance);
        } else if (manifest.noise == "student_t") {
            spec.noise = NoiseModel::student_t(manifest.df, manifest.scale);
        } else {
            throw std::invalid_argument("unknown noise '" + manifest.noise +
                                        "' (expected gaussian or student_t)");
        }
        const Signal signal = generate(spec);
        write_csv(manifest.output_path, {"truth", "noisy"}, {&*signal.truth, &signal.y});
    } catch (const std::exception& e) {
        std::cerr << "flsa simulate: " << e.what() << '\n';
        return kExitInputError;
    }
    return kExitOk;
}

/// Run one of the desk-scale experiments; output lands in the directory
/// named by output_path.
inline int cmd_bench(const RunManifest& manifest) {
    namespace fs = std::filesystem;
    try {
        const fs::path dir = manifest.output_path.empty() ? fs::path(".")
                                                          : fs::path(manifest.output_path);
        fs::create_directories(dir);

        if (manifest.experiment == 1) {
            const auto rows = run_experiment1(manifest.seed, manifest.replicates);
            std::vector<double> t_col, n_col, iters_col, sweeps_col, ms_col;
            for (const auto& row : rows) {
                t_col.push_back(static_cast<double>(row.inner_T));
                n_col.push_back(static_cast<double>(row.n));
                iters_col.push_back(row.mean_outer_iters);
                sweeps_col.push_back(row.mean_inner_sweeps);
                ms_col.push_back(row.mean_wall_ms);
            }
            write_csv((dir / "experiment1.csv").string(),
                      {"inner_T", "n", "mean_outer_iters", "mean_inner_sweeps", "mean_wall_ms"},
                      {&t_col, &n_col, &iters_col, &sweeps_col, &ms_col});
        } else if (manifest.experiment == 2) {
            const auto traces = run_experiment2(manifest.seed,
                                                manifest.bench_n ? manifest.bench_n : 1000);
            for (const auto& trace : traces) {
                std::vector<double> iteration(trace.mse.size());
                for (std::size_t k = 0; k < iteration.size(); ++k) {
                    iteration[k] = static_cast<double>(k + 1);
                }
                const std::string name = "experiment2_c" + format_double(trace.c) + ".csv";
                write_csv((dir / name).string(), {"iteration", "mse"}, {&iteration, &trace.mse});
            }
        } else if (manifest.experiment == 4) {
            const auto result = run_experiment4(manifest.seed,
                                                manifest.bench_n ? manifest.bench_n : 100);
            std::vector<double> index(result.truth.size());
            for (std::size_t i = 0; i < index.size(); ++i) index[i] = static_cast<double>(i);
            write_csv((dir / "experiment4_reconstruction.csv").string(),
                      {"index", "truth", "noisy", "beta_quadratic", "beta_lad"},
                      {&index, &result.truth, &result.noisy, &result.beta_quadratic,
                       &result.beta_lad});
            nlohmann::json summary{
                {"schema", 1},
                {"quadratic",
                 {{"lambda1", result.quad_lambda1},
                  {"lambda2", result.quad_lambda2},
                  {"mse", result.quad_mse}}},
                {"lad",
                 {{"lambda1", result.lad_lambda1},
                  {"lambda2", result.lad_lambda2},
                  {"mse", result.lad_mse}}},
            };
            detail::write_json((dir / "experiment4_summary.json").string(), summary);
        } else {
            std::cerr << "flsa bench: unknown experiment " << manifest.experiment
                      << " (expected 1, 2 or 4)\n";
            return kExitInputError;
        }
    } catch (const std::exception& e) {
        std::cerr << "flsa bench: " << e.what() << '\n';
        return kExitInputError;
    }
    return kExitOk;
}

}  // namespace flsa
