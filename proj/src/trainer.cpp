#include "sstb/trainer.hpp"

#include "sstb/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <numeric>

namespace sstb {

std::string_view to_string(BlockKind kind) { return kind == BlockKind::DA ? "DA" : "SSL"; }

BlockKind parse_block_kind(std::string_view name) {
    if (name == "DA") {
        return BlockKind::DA;
    }
    if (name == "SSL") {
        return BlockKind::SSL;
    }
    throw ValidationError("unknown block kind '" + std::string(name) + "'");
}

Matrix FineTuneBlock::scores(const FeatureMatrix& features) const {
    return predict_linear(learners, map.apply(features));
}

Matrix FineTuneBlock::contribution(const FeatureMatrix& features) const {
    return norm_learner_rows(scores(features));
}

EnsembleModel linear_only(LinearModel model, double lr) {
    EnsembleModel out;
    out.initial = std::move(model);
    out.lr = lr;
    return out;
}

Prediction predict(const EnsembleModel& model, const FeatureMatrix& features) {
    if (features.cols() != model.dims()) {
        throw ValidationError("model expects " + std::to_string(model.dims()) +
                              " features, got " + std::to_string(features.cols()));
    }
    Prediction out;
    out.scores = normalize_initial_rows(predict_linear(model.initial, features));
    for (const auto& block : model.blocks) {
        out.scores += model.lr * block.contribution(features);
    }
    out.labels = row_argmax(out.scores);
    return out;
}

double accuracy(const std::vector<int>& predicted, const OneHotLabels& truth) {
    if (predicted.size() != truth.size()) {
        throw ValidationError("accuracy: prediction and label counts differ");
    }
    if (predicted.empty()) {
        return 0.0;
    }
    std::size_t hits = 0;
    for (std::size_t n = 0; n < predicted.size(); ++n) {
        hits += predicted[n] == truth.classes[n] ? 1 : 0;
    }
    return static_cast<double>(hits) / static_cast<double>(predicted.size());
}

void TrainConfig::validate() const {
    if (blocks < 0) {
        throw ConfigError("blocks must be >= 0");
    }
    if (batch_size < 1) {
        throw ConfigError("batch size must be >= 1");
    }
    if (!(xi >= 0.0)) {
        throw ConfigError("xi must be >= 0");
    }
    if (node_size < 1) {
        throw ConfigError("node size must be >= 1");
    }
    if (!(lr > 0.0)) {
        throw ConfigError("learning rate must be > 0");
    }
    if (!(lambda >= 0.0)) {
        throw ConfigError("ridge lambda must be >= 0");
    }
}

void write_train_log(std::ostream& out, const std::vector<TrainLogEntry>& log) {
    out << "block_index,kind,labeled_cross_entropy,test_accuracy\n";
    for (const auto& e : log) {
        out << fmt::format("{},{},{:.17g},", e.block_index, to_string(e.kind),
                           e.labeled_cross_entropy);
        if (e.test_accuracy) {
            out << fmt::format("{:.17g}", *e.test_accuracy);
        }
        out << '\n';
    }
}

namespace {

Matrix stack_rows(const Matrix& top, const Matrix& bottom) {
    Matrix out(top.rows() + bottom.rows(), top.cols());
    out << top, bottom;
    return out;
}

bool has_class(const OneHotLabels& labels, int cls) {
    return std::find(labels.classes.begin(), labels.classes.end(), cls) != labels.classes.end();
}

std::vector<double> column(const Matrix& m, Eigen::Index j) {
    std::vector<double> out(static_cast<std::size_t>(m.rows()));
    for (Eigen::Index n = 0; n < m.rows(); ++n) {
        out[static_cast<std::size_t>(n)] = m(n, j);
    }
    return out;
}

}  // namespace

Trainer::Trainer(const DomainBundle& bundle, LinearModel initial, TrainConfig cfg,
                 const LabeledSet* test)
    : bundle_(bundle), test_(test), cfg_(cfg), rng_(cfg.seed) {
    cfg_.validate();
    bundle_.validate();
    if (initial.outputs() != bundle.num_classes() || initial.inputs() != bundle.dims()) {
        throw ValidationError(fmt::format(
            "initial model is {}x{} but the data has {} classes and {} features",
            initial.outputs(), initial.inputs(), bundle.num_classes(), bundle.dims()));
    }
    if (test_ && test_->features.cols() != bundle.dims()) {
        throw ValidationError("test set has a different feature count");
    }
    model_.initial = std::move(initial);
    model_.lr = cfg_.lr;

    auto initial_logits = [&](const Matrix& x) {
        return normalize_initial_rows(predict_linear(model_.initial, x));
    };
    state_.source = initial_logits(bundle.source.features);
    state_.target_labeled = initial_logits(bundle.target_labeled.features);
    state_.target_unlabeled = initial_logits(bundle.target_unlabeled);
    if (test_) {
        test_logits_ = initial_logits(test_->features);
    }

    const auto predicted = row_argmax(state_.source);
    source_in_loss_.resize(predicted.size());
    for (std::size_t n = 0; n < predicted.size(); ++n) {
        source_in_loss_[n] = !cfg_.remove_misclassified_source ||
                             predicted[n] == bundle.source.labels.classes[n];
    }
}

BlockKind Trainer::next_kind() const noexcept {
    return model_.blocks.size() % 2 == 0 ? BlockKind::DA : BlockKind::SSL;
}

void Trainer::run_block() {
    commit(next_kind() == BlockKind::DA ? da_step() : ssl_step());
}

WorkingResponses Trainer::da_source_responses() const {
    WorkingResponses wr = working_responses(state_.source, bundle_.source.labels);
    if (cfg_.remove_misclassified_source) {
        const auto predicted = row_argmax(state_.source);
        for (std::size_t n = 0; n < predicted.size(); ++n) {
            if (predicted[n] != bundle_.source.labels.classes[n]) {
                wr.weight.row(static_cast<Eigen::Index>(n)).setZero();
            }
        }
    }
    return wr;
}

BatchIndexSet Trainer::partition_batch(const OneHotLabels& labels, const Matrix& weights,
                                       int cls) {
    const auto w = column(weights, cls);
    const auto bs = static_cast<std::size_t>(cfg_.batch_size);
    if (has_class(labels, cls)) {
        return balanced_sample(labels, w, cls, bs, rng_);
    }
    return sample_negatives(labels, w, cls, bs, rng_);
}

LinearModel Trainer::fit_learners(const Matrix& mapped, const Matrix& responses,
                                  const Matrix& weights,
                                  const std::vector<BatchIndexSet>& batches) {
    if (!cfg_.deterministic_full_batch) {
        return fit_block_learners(mapped, responses, batches, cfg_.lambda, cfg_.threads);
    }
    const auto J = responses.cols();
    LinearModel stacked{Matrix(J, mapped.cols()), Vector(J)};
    for (Eigen::Index j = 0; j < J; ++j) {
        const LinearModel learner =
            fit_ridge_weighted(mapped, responses.col(j), weights.col(j), cfg_.lambda);
        stacked.weights.row(j) = learner.weights.row(0);
        stacked.bias(j) = learner.bias(0);
    }
    return stacked;
}

FineTuneBlock Trainer::da_step() {
    const int J = bundle_.num_classes();
    RandomFeatureMap map =
        build_map(bundle_.source.features, cfg_.node_size, cfg_.activation, rng_);

    const WorkingResponses target =
        working_responses(state_.target_labeled, bundle_.target_labeled.labels);
    const WorkingResponses source = da_source_responses();

    // Labeled target rows first, then source rows.
    const Matrix mapped =
        stack_rows(map.apply(bundle_.target_labeled.features), map.apply(bundle_.source.features));
    const Matrix responses = stack_rows(target.response, source.response);
    const Matrix weights = stack_rows(target.weight, source.weight);
    const auto offset = static_cast<std::size_t>(bundle_.target_labeled.size());

    std::vector<BatchIndexSet> batches;
    if (!cfg_.deterministic_full_batch) {
        const bool source_usable = bundle_.source.size() > 0 && source.weight.sum() > 0.0;
        if (!source_usable) {
            warnings_.push_back(fmt::format(
                "block {}: every source weight is zero; fitting on labeled target only",
                model_.blocks.size() + 1));
        }
        for (int j = 0; j < J; ++j) {
            BatchIndexSet batch = partition_batch(bundle_.target_labeled.labels, target.weight, j);
            if (source_usable) {
                for (auto i : partition_batch(bundle_.source.labels, source.weight, j)) {
                    batch.push_back(i + offset);
                }
            }
            batches.push_back(std::move(batch));
        }
    }
    LinearModel learners = fit_learners(mapped, responses, weights, batches);
    last_batches_ = std::move(batches);
    return {BlockKind::DA, std::move(map), std::move(learners)};
}

FineTuneBlock Trainer::ssl_step() {
    if (!last_da_block_) {
        throw Error("ssl_step requires a committed DA block");
    }
    const auto& unlabeled = bundle_.target_unlabeled;
    if (unlabeled.rows() < 1) {
        throw ValidationError("SSL blocks need at least one unlabeled target sample");
    }
    const int J = bundle_.num_classes();
    RandomFeatureMap map =
        build_map(bundle_.source.features, cfg_.node_size, cfg_.activation, rng_);

    last_pseudo_labels_ = {row_argmax(state_.target_unlabeled), J};

    const RowVector scale = cfg_.xi * column_std(unlabeled);
    std::normal_distribution<double> normal(0.0, 1.0);
    last_noise_.resize(unlabeled.rows(), unlabeled.cols());
    for (Eigen::Index n = 0; n < unlabeled.rows(); ++n) {
        for (Eigen::Index c = 0; c < unlabeled.cols(); ++c) {
            last_noise_(n, c) = normal(rng_) * scale(c);
        }
    }
    const Matrix noisy = unlabeled + last_noise_;

    // Logits of the noisy rows: ensemble before the DA block on clean inputs,
    // plus the DA block evaluated on the noisy inputs.
    const FineTuneBlock& da = model_.blocks[*last_da_block_];
    last_noisy_logits_ = unlabeled_before_da_ + model_.lr * da.contribution(noisy);

    const WorkingResponses target =
        working_responses(state_.target_labeled, bundle_.target_labeled.labels);
    const WorkingResponses augmented = working_responses(last_noisy_logits_, last_pseudo_labels_);

    const Matrix mapped =
        stack_rows(map.apply(bundle_.target_labeled.features), map.apply(noisy));
    const Matrix responses = stack_rows(target.response, augmented.response);
    const Matrix weights = stack_rows(target.weight, augmented.weight);
    const auto offset = static_cast<std::size_t>(bundle_.target_labeled.size());

    std::vector<BatchIndexSet> batches;
    if (!cfg_.deterministic_full_batch) {
        for (int j = 0; j < J; ++j) {
            BatchIndexSet batch = partition_batch(bundle_.target_labeled.labels, target.weight, j);
            for (auto i : partition_batch(last_pseudo_labels_, augmented.weight, j)) {
                batch.push_back(i + offset);
            }
            batches.push_back(std::move(batch));
        }
    }
    LinearModel learners = fit_learners(mapped, responses, weights, batches);
    last_batches_ = std::move(batches);
    return {BlockKind::SSL, std::move(map), std::move(learners)};
}

void Trainer::commit(FineTuneBlock block) {
    if (block.kind == BlockKind::DA) {
        unlabeled_before_da_ = state_.target_unlabeled;
    }
    state_.source += model_.lr * block.contribution(bundle_.source.features);
    state_.target_labeled += model_.lr * block.contribution(bundle_.target_labeled.features);
    state_.target_unlabeled += model_.lr * block.contribution(bundle_.target_unlabeled);
    if (test_) {
        test_logits_ += model_.lr * block.contribution(test_->features);
    }

    const BlockKind kind = block.kind;
    model_.blocks.push_back(std::move(block));
    if (kind == BlockKind::DA) {
        last_da_block_ = model_.blocks.size() - 1;
    }

    TrainLogEntry entry;
    entry.block_index = static_cast<int>(model_.blocks.size());
    entry.kind = kind;
    entry.labeled_cross_entropy = labeled_cross_entropy();
    if (test_) {
        entry.test_accuracy = accuracy(row_argmax(test_logits_), test_->labels);
    }
    log_.push_back(entry);
}

double Trainer::labeled_cross_entropy() const {
    double total = 0.0;
    std::size_t count = 0;
    const auto& yt = bundle_.target_labeled.labels.classes;
    for (std::size_t n = 0; n < yt.size(); ++n) {
        total += cross_entropy(state_.target_labeled.row(static_cast<Eigen::Index>(n)).transpose(),
                               yt[n]);
        ++count;
    }
    const auto& ys = bundle_.source.labels.classes;
    for (std::size_t n = 0; n < ys.size(); ++n) {
        if (source_in_loss_[n]) {
            total += cross_entropy(state_.source.row(static_cast<Eigen::Index>(n)).transpose(),
                                   ys[n]);
            ++count;
        }
    }
    return count ? total / static_cast<double>(count) : 0.0;
}

TrainResult train(const DomainBundle& bundle, const LinearModel& initial, const TrainConfig& cfg,
                  const LabeledSet* test) {
    Trainer trainer(bundle, initial, cfg, test);
    for (int k = 0; k < 2 * cfg.blocks; ++k) {
        trainer.run_block();
    }
    return {trainer.model(), trainer.log(), trainer.warnings()};
}

}  // namespace sstb
