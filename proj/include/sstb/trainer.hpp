#pragma once

#include "sstb/logitboost.hpp"
#include "sstb/mapping.hpp"
#include "sstb/ridge.hpp"
#include "sstb/types.hpp"

#include <optional>
#include <ostream>
#include <string>
#include <string_view>

namespace sstb {

enum class BlockKind { DA, SSL };

std::string_view to_string(BlockKind kind);
BlockKind parse_block_kind(std::string_view name);

/// One base learner of the ensemble: a frozen random map feeding J ridge learners.
struct FineTuneBlock {
    BlockKind kind = BlockKind::DA;
    RandomFeatureMap map;
    LinearModel learners;  ///< J x ns

    /// Raw learner scores on `features` (N x J).
    Matrix scores(const FeatureMatrix& features) const;
    /// Norm-transformed scores, before the learning-rate scale.
    Matrix contribution(const FeatureMatrix& features) const;
};

/// normalize_initial(initial) + lr * sum over blocks of norm_learner(block), in block order.
struct EnsembleModel {
    LinearModel initial;
    std::vector<FineTuneBlock> blocks;
    double lr = 0.1;

    int num_classes() const noexcept { return static_cast<int>(initial.outputs()); }
    Eigen::Index dims() const noexcept { return initial.inputs(); }
};

/// Wraps a bare linear layer as a zero-block ensemble.
EnsembleModel linear_only(LinearModel model, double lr = 0.1);

struct Prediction {
    Matrix scores;
    std::vector<int> labels;
};

/// Ties in the argmax go to the lowest class index.
Prediction predict(const EnsembleModel& model, const FeatureMatrix& features);

double accuracy(const std::vector<int>& predicted, const OneHotLabels& truth);

struct TrainConfig {
    int blocks = 100;  ///< K, the number of DA/SSL pairs
    int batch_size = 64;
    double xi = 1.0;
    int node_size = 100;
    double lr = 0.1;
    double lambda = 0.01;
    std::uint64_t seed = 2021;
    bool deterministic_full_batch = false;
    bool remove_misclassified_source = true;
    Activation activation = Activation::Tanh;
    int threads = 1;

    void validate() const;
};

/// Current ensemble logits per training partition, updated incrementally.
struct BoostState {
    Matrix source;
    Matrix target_labeled;
    Matrix target_unlabeled;
};

struct TrainLogEntry {
    int block_index = 0;  ///< 1-based base-learner index
    BlockKind kind = BlockKind::DA;
    double labeled_cross_entropy = 0.0;
    std::optional<double> test_accuracy;
};

void write_train_log(std::ostream& out, const std::vector<TrainLogEntry>& log);

/// Boosting driver. Blocks alternate DA, SSL, DA, ... Each call to
/// `run_block` appends one base learner and updates the cached logits.
class Trainer {
public:
    /// `bundle` and `test` must outlive the trainer.
    Trainer(const DomainBundle& bundle, LinearModel initial, TrainConfig cfg,
            const LabeledSet* test = nullptr);

    BlockKind next_kind() const noexcept;
    void run_block();

    /// DA working responses of the source partition under the current
    /// ensemble, with misclassified rows zeroed when removal is on.
    WorkingResponses da_source_responses() const;

    /// Build the next DA / SSL block without committing it. ssl_step requires
    /// a committed DA block.
    FineTuneBlock da_step();
    FineTuneBlock ssl_step();
    void commit(FineTuneBlock block);

    const EnsembleModel& model() const noexcept { return model_; }
    const BoostState& state() const noexcept { return state_; }
    const std::vector<TrainLogEntry>& log() const noexcept { return log_; }
    const std::vector<std::string>& warnings() const noexcept { return warnings_; }

    /// Pseudo-labels and noise used by the most recent ssl_step.
    const OneHotLabels& last_pseudo_labels() const noexcept { return last_pseudo_labels_; }
    const Matrix& last_noise() const noexcept { return last_noise_; }
    /// Per-class row batches of the most recent step (empty in full-batch mode).
    /// Rows index the stacked training set: labeled target first.
    const std::vector<BatchIndexSet>& last_batches() const noexcept { return last_batches_; }
    /// Unlabeled-row logits the last ssl_step used (the noisy-input forward pass).
    const Matrix& last_noisy_logits() const noexcept { return last_noisy_logits_; }

    /// Mean cross-entropy over the labeled target set and the source rows the
    /// initial model classifies correctly (all source rows when removal is off).
    double labeled_cross_entropy() const;

private:
    BatchIndexSet partition_batch(const OneHotLabels& labels, const Matrix& weights, int cls);
    LinearModel fit_learners(const Matrix& mapped, const Matrix& responses,
                             const Matrix& weights, const std::vector<BatchIndexSet>& batches);

    const DomainBundle& bundle_;
    const LabeledSet* test_;
    TrainConfig cfg_;
    Rng rng_;
    EnsembleModel model_;
    BoostState state_;
    Matrix test_logits_;
    std::vector<bool> source_in_loss_;

    std::optional<std::size_t> last_da_block_;
    Matrix unlabeled_before_da_;
    OneHotLabels last_pseudo_labels_;
    Matrix last_noise_;
    Matrix last_noisy_logits_;
    std::vector<BatchIndexSet> last_batches_;

    std::vector<TrainLogEntry> log_;
    std::vector<std::string> warnings_;
};

struct TrainResult {
    EnsembleModel model;
    std::vector<TrainLogEntry> log;
    std::vector<std::string> warnings;
};

/// Runs 2K blocks. K = 0 returns the initial model with no blocks.
TrainResult train(const DomainBundle& bundle, const LinearModel& initial, const TrainConfig& cfg,
                  const LabeledSet* test = nullptr);

}  // namespace sstb
