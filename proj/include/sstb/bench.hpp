#pragma once

#include "sstb/dataset.hpp"
#include "sstb/sourcegen.hpp"
#include "sstb/trainer.hpp"

#include <optional>
#include <ostream>
#include <string>
#include <string_view>

namespace sstb {

struct TrialResult {
    double initial_accuracy = 0.0;  ///< test accuracy of the initial classifier
    double accuracy = 0.0;          ///< test accuracy after boosting
};

/// Source-only ridge classifier -> boosting on the synthetic bundle of `data`.
/// The training seed is `train.seed`; the data seed is `data.seed`.
TrialResult run_ssda_trial(const ShiftBenchmarkConfig& data, const TrainConfig& train,
                           double init_lambda = 1e-3);

struct SfdaTrial {
    TrialResult result;
    double argmax_consistency = 0.0;  ///< fraction of synthesized rows the classifier assigns to their class
    double max_mean_error = 0.0;      ///< |mean(aligned) - mean(target)|, worst column
    double max_std_error = 0.0;       ///< |std(aligned) - std(target)|, worst column
};

/// Source classifier (ridge, `init_lambda`) -> virtual source -> boosting on
/// (virtual source, labeled target, unlabeled target).
SfdaTrial run_sfda_trial(const ShiftBenchmarkConfig& data, const TrainConfig& train,
                         const SourceSynthesisConfig& synth, double init_lambda = 1e-6);

struct BenchRow {
    std::string scenario;
    std::string parameter;
    std::string value;
    std::string seed;  ///< seed value, or "aggregate"
    double initial_accuracy = 0.0;
    double accuracy = 0.0;
    std::optional<double> accuracy_std;  ///< aggregate rows only
};

struct BenchOptions {
    std::string scenario;
    int seeds = 5;
    std::uint64_t base_seed = 2021;
    ShiftBenchmarkConfig data;
    TrainConfig train;
};

/// Scenario names accepted by run_bench.
const std::vector<std::string>& bench_scenarios();

/// Default data/training setup of the benchmark harness.
BenchOptions default_bench_options(std::string scenario);

/// Runs the scenario grid: per configuration one row per seed, then an
/// aggregate row with mean/std accuracy. Throws ConfigError on unknown names.
std::vector<BenchRow> run_bench(const BenchOptions& options);

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows);

}  // namespace sstb
