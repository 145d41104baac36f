// Command-line front end: train, bootstrap-init, predict, synth-source, bench.

#include "sstb/bench.hpp"
#include "sstb/dataset.hpp"
#include "sstb/error.hpp"
#include "sstb/model_io.hpp"
#include "sstb/sourcegen.hpp"
#include "sstb/trainer.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <fstream>
#include <iostream>

namespace {

using namespace sstb;

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ValidationError("cannot write " + path);
    }
    return out;
}

bool has_label_column(const std::string& path) {
    std::ifstream in(path);
    std::string header;
    if (!in || !std::getline(in, header)) {
        throw ValidationError("cannot read header of " + path);
    }
    while (!header.empty() && (header.back() == '\r' || header.back() == ' ')) {
        header.pop_back();
    }
    const auto comma = header.rfind(',');
    return header.substr(comma == std::string::npos ? 0 : comma + 1) == "label";
}

LabeledSet load_labeled(const std::string& path, std::optional<int> num_classes) {
    auto loaded = load_features(path, true, num_classes);
    return {std::move(loaded.features), std::move(*loaded.labels)};
}

struct TrainFlags {
    std::string source;
    std::string target_labeled;
    std::string target_unlabeled;
    std::string init_model;
    bool bootstrap_init = false;
    double init_lambda = 1e-3;
    std::string test;
    std::string out;
    std::string log;
    std::string activation = "tanh";
    TrainConfig cfg;
};

struct BootstrapFlags {
    std::string source;
    std::string target_labeled;
    bool source_only = false;
    double lambda = 1e-3;
    std::string out;
};

struct PredictFlags {
    std::string model;
    std::string features;
    std::string out;
};

struct SynthFlags {
    std::string linear_layer;
    std::vector<std::string> target_features;
    SourceSynthesisConfig cfg;
    std::uint64_t seed = 2021;
    std::string out;
};

struct BenchFlags {
    std::string scenario;
    int seeds = 5;
    std::uint64_t seed = 2021;
    int blocks = 50;
    int threads = 1;
    std::string out;
};

LinearModel bootstrap(const LabeledSet& source, const LabeledSet* target, double lambda) {
    if (!target) {
        return fit_ridge_classifier(source.features, source.labels, lambda);
    }
    Matrix x(source.features.rows() + target->features.rows(), source.features.cols());
    x << source.features, target->features;
    OneHotLabels y = source.labels;
    y.classes.insert(y.classes.end(), target->labels.classes.begin(),
                     target->labels.classes.end());
    return fit_ridge_classifier(x, y, lambda);
}

int cmd_train(const TrainFlags& f) {
    TrainConfig cfg = f.cfg;
    cfg.activation = parse_activation(f.activation);
    cfg.validate();

    std::optional<EnsembleModel> init;
    if (!f.init_model.empty()) {
        init = load_model(f.init_model);
        if (!init->blocks.empty()) {
            throw ValidationError("--init-model must hold a linear layer without blocks");
        }
    }

    // Class count: the initial model's when given, otherwise the largest label seen.
    auto source_raw = load_labeled(f.source, std::nullopt);
    auto target_raw = load_labeled(f.target_labeled, std::nullopt);
    int J = std::max(source_raw.labels.num_classes, target_raw.labels.num_classes);
    if (init) {
        if (init->num_classes() < J) {
            throw ValidationError(fmt::format("labels reach class {} but --init-model has {} outputs",
                                              J - 1, init->num_classes()));
        }
        J = init->num_classes();
    }
    source_raw.labels.num_classes = J;
    target_raw.labels.num_classes = J;

    DomainBundle bundle{std::move(source_raw), std::move(target_raw),
                        load_features(f.target_unlabeled, false).features};
    bundle.validate();

    std::optional<LabeledSet> test;
    if (!f.test.empty()) {
        test = load_labeled(f.test, J);
    }

    LinearModel initial = init ? init->initial
                               : bootstrap(bundle.source, &bundle.target_labeled, f.init_lambda);
    const TrainResult result = train(bundle, initial, cfg, test ? &*test : nullptr);
    for (const auto& w : result.warnings) {
        std::cerr << "warning: " << w << '\n';
    }

    open_out(f.out) << dump_model(result.model);
    auto log = open_out(f.log.empty() ? f.out + ".log.csv" : f.log);
    write_train_log(log, result.log);
    if (test && !result.log.empty()) {
        std::cerr << fmt::format("test accuracy after {} blocks: {:.4f}\n", result.log.size(),
                                 *result.log.back().test_accuracy);
    }
    return 0;
}

int cmd_bootstrap_init(const BootstrapFlags& f) {
    auto source = load_labeled(f.source, std::nullopt);
    std::optional<LabeledSet> target;
    if (!f.source_only && !f.target_labeled.empty()) {
        target = load_labeled(f.target_labeled, std::nullopt);
        const int J = std::max(source.labels.num_classes, target->labels.num_classes);
        source.labels.num_classes = J;
        target->labels.num_classes = J;
        if (target->features.cols() != source.features.cols()) {
            throw ValidationError(fmt::format("source has {} features but target has {}",
                                              source.features.cols(), target->features.cols()));
        }
    }
    if (source.labels.num_classes < 2) {
        throw ValidationError("bootstrap-init needs at least two classes");
    }
    const LinearModel model = bootstrap(source, target ? &*target : nullptr, f.lambda);
    open_out(f.out) << dump_model(linear_only(model));
    return 0;
}

int cmd_predict(const PredictFlags& f) {
    const EnsembleModel model = load_model(f.model);
    const auto loaded =
        load_features(f.features, has_label_column(f.features), model.num_classes());
    const Prediction p = predict(model, loaded.features);
    auto out = open_out(f.out);
    std::string buf = "row,predicted";
    for (int j = 0; j < model.num_classes(); ++j) {
        buf += ",score" + std::to_string(j);
    }
    buf += '\n';
    for (Eigen::Index n = 0; n < p.scores.rows(); ++n) {
        buf += fmt::format("{},{}", n, p.labels[static_cast<std::size_t>(n)]);
        for (Eigen::Index j = 0; j < p.scores.cols(); ++j) {
            buf += fmt::format(",{:.17g}", p.scores(n, j));
        }
        buf += '\n';
    }
    out << buf;
    if (loaded.labels && loaded.labels->size() > 0) {
        std::cerr << fmt::format("accuracy: {:.4f}\n", accuracy(p.labels, *loaded.labels));
    }
    return 0;
}

int cmd_synth_source(const SynthFlags& f) {
    const EnsembleModel layer = load_model(f.linear_layer);
    std::vector<Matrix> parts;
    Eigen::Index rows = 0;
    for (const auto& path : f.target_features) {
        parts.push_back(load_features(path, has_label_column(path)).features);
        if (parts.back().cols() != layer.dims()) {
            throw ValidationError(fmt::format("{} has {} features but the linear layer expects {}",
                                              path, parts.back().cols(), layer.dims()));
        }
        rows += parts.back().rows();
    }
    Matrix target(rows, layer.dims());
    Eigen::Index at = 0;
    for (const auto& p : parts) {
        target.middleRows(at, p.rows()) = p;
        at += p.rows();
    }
    Rng rng(f.seed);
    const SynthesizedSource synth = synthesize_source(layer.initial, target, f.cfg, rng);
    auto out = open_out(f.out);
    write_features(out, synth.data.features, &synth.data.labels);
    return 0;
}

int cmd_bench(const BenchFlags& f) {
    BenchOptions o = default_bench_options(f.scenario);
    o.seeds = f.seeds;
    o.base_seed = f.seed;
    o.train.blocks = f.blocks;
    o.train.threads = f.threads;
    const auto rows = run_bench(o);
    if (f.out.empty() || f.out == "-") {
        write_bench_csv(std::cout, rows);
    } else {
        auto out = open_out(f.out);
        write_bench_csv(out, rows);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Boosting-based fine-tuning of a linear classifier for semi-supervised domain adaptation"};
    app.require_subcommand(1);

    TrainFlags train_flags;
    auto* train_cmd = app.add_subcommand("train", "Fine-tune an initial linear model with boosting blocks");
    train_cmd->add_option("--source", train_flags.source, "Labeled source CSV")->required();
    train_cmd->add_option("--target-labeled", train_flags.target_labeled, "Labeled target CSV")->required();
    train_cmd->add_option("--target-unlabeled", train_flags.target_unlabeled, "Unlabeled target CSV")->required();
    auto* init_opt = train_cmd->add_option("--init-model", train_flags.init_model, "Initial linear layer (model JSON)");
    auto* boot_opt = train_cmd->add_flag("--bootstrap-init", train_flags.bootstrap_init,
                                         "Fit the initial model by ridge on source + labeled target");
    init_opt->excludes(boot_opt);
    train_cmd->add_option("--init-lambda", train_flags.init_lambda, "Ridge strength for --bootstrap-init")
        ->capture_default_str();
    train_cmd->add_option("--blocks", train_flags.cfg.blocks, "Number of DA/SSL block pairs K")->capture_default_str();
    train_cmd->add_option("--batch-size", train_flags.cfg.batch_size, "Balanced-sampling batch size")->capture_default_str();
    train_cmd->add_option("--xi", train_flags.cfg.xi, "Noise magnitude for unlabeled augmentation")->capture_default_str();
    train_cmd->add_option("--node-size", train_flags.cfg.node_size, "Random feature map width")->capture_default_str();
    train_cmd->add_option("--lr", train_flags.cfg.lr, "Learning rate")->capture_default_str();
    train_cmd->add_option("--ridge-lambda", train_flags.cfg.lambda, "Base-learner ridge strength")->capture_default_str();
    train_cmd->add_option("--seed", train_flags.cfg.seed, "Random seed")->capture_default_str();
    train_cmd->add_option("--activation", train_flags.activation, "tanh, sigmoid or relu")->capture_default_str();
    train_cmd->add_option("--threads", train_flags.cfg.threads, "Parallel ridge fits per block")->capture_default_str();
    train_cmd->add_flag("--deterministic", train_flags.cfg.deterministic_full_batch,
                        "Full-batch weighted fits instead of balanced sampling");
    bool no_removal = false;
    train_cmd->add_flag("--no-source-removal", no_removal, "Keep misclassified source samples");
    train_cmd->add_option("--test", train_flags.test, "Labeled target test CSV for the log");
    train_cmd->add_option("--out", train_flags.out, "Output model JSON")->required();
    train_cmd->add_option("--log", train_flags.log, "Training log CSV (default: <out>.log.csv)");

    BootstrapFlags boot_flags;
    auto* boot_cmd = app.add_subcommand("bootstrap-init", "Fit a one-vs-rest ridge classifier as the initial model");
    boot_cmd->add_option("--source", boot_flags.source, "Labeled source CSV")->required();
    boot_cmd->add_option("--target-labeled", boot_flags.target_labeled, "Labeled target CSV");
    boot_cmd->add_flag("--source-only", boot_flags.source_only, "Ignore --target-labeled");
    boot_cmd->add_option("--ridge-lambda", boot_flags.lambda, "Ridge strength")->capture_default_str();
    boot_cmd->add_option("--out", boot_flags.out, "Output model JSON")->required();

    PredictFlags predict_flags;
    auto* predict_cmd = app.add_subcommand("predict", "Score a feature CSV with a model");
    predict_cmd->add_option("--model", predict_flags.model, "Model JSON")->required();
    predict_cmd->add_option("--features", predict_flags.features, "Feature CSV (label column optional)")->required();
    predict_cmd->add_option("--out", predict_flags.out, "Predictions CSV")->required();

    SynthFlags synth_flags;
    auto* synth_cmd = app.add_subcommand("synth-source", "Synthesize a virtual source domain from a linear layer");
    synth_cmd->add_option("--linear-layer", synth_flags.linear_layer, "Model JSON holding the last linear layer")->required();
    synth_cmd->add_option("--target-features", synth_flags.target_features,
                          "Target feature CSVs to align to (repeatable)")->required();
    synth_cmd->add_option("--per-class", synth_flags.cfg.n_per_class, "Samples per class")->capture_default_str();
    synth_cmd->add_option("--beta-a", synth_flags.cfg.beta_a, "Beta distribution a")->capture_default_str();
    synth_cmd->add_option("--beta-b", synth_flags.cfg.beta_b, "Beta distribution b")->capture_default_str();
    synth_cmd->add_option("--lambda", synth_flags.cfg.lambda, "Ridge strength of the pseudo-inverse")->capture_default_str();
    synth_cmd->add_option("--seed", synth_flags.seed, "Random seed")->capture_default_str();
    synth_cmd->add_option("--out", synth_flags.out, "Output labeled feature CSV")->required();

    BenchFlags bench_flags;
    auto* bench_cmd = app.add_subcommand("bench", "Run a synthetic-benchmark experiment grid");
    bench_cmd->add_option("--scenario", bench_flags.scenario,
                          "shift-sweep, xi-sweep, blocks-sweep, removal-ablation or sfda-pipeline")->required();
    bench_cmd->add_option("--seeds", bench_flags.seeds, "Seeds per configuration")->capture_default_str();
    bench_cmd->add_option("--seed", bench_flags.seed, "First seed")->capture_default_str();
    bench_cmd->add_option("--blocks", bench_flags.blocks, "Block pairs K where not swept")->capture_default_str();
    bench_cmd->add_option("--threads", bench_flags.threads, "Parallel ridge fits per block")->capture_default_str();
    bench_cmd->add_option("--out", bench_flags.out, "Metrics CSV (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (*train_cmd) {
            if (train_flags.init_model.empty() && !train_flags.bootstrap_init) {
                std::cerr << "train: one of --init-model or --bootstrap-init is required\n";
                return kExitUsage;
            }
            train_flags.cfg.remove_misclassified_source = !no_removal;
            return cmd_train(train_flags);
        }
        if (*boot_cmd) {
            return cmd_bootstrap_init(boot_flags);
        }
        if (*predict_cmd) {
            return cmd_predict(predict_flags);
        }
        if (*synth_cmd) {
            return cmd_synth_source(synth_flags);
        }
        if (*bench_cmd) {
            return cmd_bench(bench_flags);
        }
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    }
    return kExitUsage;
}
