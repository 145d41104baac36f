#include "sstb/bench.hpp"

#include "sstb/error.hpp"

#include <fmt/format.h>

#include <cmath>
#include <functional>
#include <numeric>

namespace sstb {

TrialResult run_ssda_trial(const ShiftBenchmarkConfig& data, const TrainConfig& train,
                           double init_lambda) {
    const ShiftBenchmark bench = make_shift_benchmark(data);
    const LinearModel initial =
        fit_ridge_classifier(bench.bundle.source.features, bench.bundle.source.labels, init_lambda);
    TrialResult out;
    out.initial_accuracy =
        accuracy(predict(linear_only(initial), bench.test.features).labels, bench.test.labels);
    const TrainResult trained = sstb::train(bench.bundle, initial, train);
    out.accuracy = accuracy(predict(trained.model, bench.test.features).labels, bench.test.labels);
    return out;
}

SfdaTrial run_sfda_trial(const ShiftBenchmarkConfig& data, const TrainConfig& train,
                         const SourceSynthesisConfig& synth, double init_lambda) {
    const ShiftBenchmark bench = make_shift_benchmark(data);
    const LinearModel theta =
        fit_ridge_classifier(bench.bundle.source.features, bench.bundle.source.labels, init_lambda);

    Matrix target(bench.bundle.target_labeled.features.rows() + bench.bundle.target_unlabeled.rows(),
                  bench.bundle.dims());
    target << bench.bundle.target_labeled.features, bench.bundle.target_unlabeled;

    Rng rng(train.seed);
    const SynthesizedSource virtual_source = synthesize_source(theta, target, synth, rng);

    SfdaTrial out;
    const auto consistent =
        row_argmax(predict_linear(theta, virtual_source.unaligned));
    std::size_t hits = 0;
    for (std::size_t n = 0; n < consistent.size(); ++n) {
        hits += consistent[n] == virtual_source.data.labels.classes[n] ? 1 : 0;
    }
    out.argmax_consistency = static_cast<double>(hits) / static_cast<double>(consistent.size());
    out.max_mean_error =
        (column_mean(virtual_source.data.features) - column_mean(target)).cwiseAbs().maxCoeff();
    out.max_std_error =
        (column_std(virtual_source.data.features) - column_std(target)).cwiseAbs().maxCoeff();

    DomainBundle sfda = bench.bundle;
    sfda.source = virtual_source.data;
    out.result.initial_accuracy =
        accuracy(predict(linear_only(theta), bench.test.features).labels, bench.test.labels);
    const TrainResult trained = sstb::train(sfda, theta, train);
    out.result.accuracy =
        accuracy(predict(trained.model, bench.test.features).labels, bench.test.labels);
    return out;
}

const std::vector<std::string>& bench_scenarios() {
    static const std::vector<std::string> names{"shift-sweep", "xi-sweep", "blocks-sweep",
                                                "removal-ablation", "sfda-pipeline"};
    return names;
}

BenchOptions default_bench_options(std::string scenario) {
    BenchOptions o;
    o.scenario = std::move(scenario);
    o.data.num_classes = 4;
    o.data.dims = 20;
    o.data.n_source = 400;
    o.data.n_target = 600;
    o.data.shift = 0.75;
    o.data.n_shot = 3;
    o.train.blocks = 50;
    return o;
}

namespace {

struct GridPoint {
    std::string parameter;
    std::string value;
    std::function<TrialResult(std::uint64_t seed)> run;
};

std::vector<GridPoint> grid_for(const BenchOptions& o) {
    std::vector<GridPoint> grid;
    auto ssda = [](ShiftBenchmarkConfig data, TrainConfig train) {
        return [data, train](std::uint64_t seed) mutable {
            data.seed = seed;
            train.seed = seed;
            return run_ssda_trial(data, train);
        };
    };
    if (o.scenario == "shift-sweep") {
        for (double shift : {0.0, 0.25, 0.5, 0.75, 1.0, 1.5}) {
            auto data = o.data;
            data.shift = shift;
            grid.push_back({"shift", fmt::format("{}", shift), ssda(data, o.train)});
        }
    } else if (o.scenario == "xi-sweep") {
        for (double xi : {0.0, 0.25, 0.5, 0.75, 1.0}) {
            auto train = o.train;
            train.xi = xi;
            grid.push_back({"xi", fmt::format("{}", xi), ssda(o.data, train)});
        }
    } else if (o.scenario == "blocks-sweep") {
        for (int k : {0, 5, 10, 20, 50, 100}) {
            auto train = o.train;
            train.blocks = k;
            grid.push_back({"blocks", std::to_string(k), ssda(o.data, train)});
        }
    } else if (o.scenario == "removal-ablation") {
        auto data = o.data;
        if (data.source_label_noise == 0.0) {
            data.source_label_noise = 0.2;
        }
        for (bool removal : {true, false}) {
            auto train = o.train;
            train.remove_misclassified_source = removal;
            grid.push_back({"remove_misclassified_source", removal ? "on" : "off",
                            ssda(data, train)});
        }
    } else if (o.scenario == "sfda-pipeline") {
        auto data = o.data;
        data.dims = std::max(data.dims, 32);
        grid.push_back({"mode", "sfda", [data, train = o.train](std::uint64_t seed) mutable {
                            data.seed = seed;
                            train.seed = seed;
                            return run_sfda_trial(data, train, SourceSynthesisConfig{}).result;
                        }});
    } else {
        std::string names;
        for (const auto& n : bench_scenarios()) {
            names += (names.empty() ? "" : ", ") + n;
        }
        throw ConfigError("unknown scenario '" + o.scenario + "'; valid: " + names);
    }
    return grid;
}

}  // namespace

std::vector<BenchRow> run_bench(const BenchOptions& options) {
    if (options.seeds < 1) {
        throw ConfigError("--seeds must be at least 1");
    }
    std::vector<BenchRow> rows;
    for (const auto& point : grid_for(options)) {
        std::vector<double> acc;
        std::vector<double> init;
        for (int s = 0; s < options.seeds; ++s) {
            const std::uint64_t seed = options.base_seed + static_cast<std::uint64_t>(s);
            const TrialResult r = point.run(seed);
            rows.push_back({options.scenario, point.parameter, point.value, std::to_string(seed),
                            r.initial_accuracy, r.accuracy, std::nullopt});
            acc.push_back(r.accuracy);
            init.push_back(r.initial_accuracy);
        }
        const double n = static_cast<double>(acc.size());
        const double mean = std::accumulate(acc.begin(), acc.end(), 0.0) / n;
        const double init_mean = std::accumulate(init.begin(), init.end(), 0.0) / n;
        double var = 0.0;
        for (double a : acc) {
            var += (a - mean) * (a - mean);
        }
        rows.push_back({options.scenario, point.parameter, point.value, "aggregate", init_mean,
                        mean, std::sqrt(var / n)});
    }
    return rows;
}

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
    out << "scenario,parameter,value,seed,initial_accuracy,accuracy,accuracy_std\n";
    for (const auto& r : rows) {
        out << fmt::format("{},{},{},{},{:.6f},{:.6f},", r.scenario, r.parameter, r.value, r.seed,
                           r.initial_accuracy, r.accuracy);
        if (r.accuracy_std) {
            out << fmt::format("{:.6f}", *r.accuracy_std);
        }
        out << '\n';
    }
}

}  // namespace sstb
