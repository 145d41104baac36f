#include "sstb/types.hpp"

#include "sstb/error.hpp"

#include <cmath>
#include <string>

namespace sstb {

Matrix OneHotLabels::indicator() const {
    Matrix y = Matrix::Zero(static_cast<Eigen::Index>(classes.size()), num_classes);
    for (std::size_t n = 0; n < classes.size(); ++n) {
        y(static_cast<Eigen::Index>(n), classes[n]) = 1.0;
    }
    return y;
}

std::vector<std::size_t> OneHotLabels::counts() const {
    std::vector<std::size_t> out(static_cast<std::size_t>(num_classes), 0);
    for (int c : classes) {
        ++out[static_cast<std::size_t>(c)];
    }
    return out;
}

namespace {

void check_labels(const LabeledSet& set, const char* name) {
    if (static_cast<std::size_t>(set.features.rows()) != set.labels.size()) {
        throw ValidationError(std::string(name) + ": feature rows and label count differ");
    }
    for (int c : set.labels.classes) {
        if (c < 0 || c >= set.labels.num_classes) {
            throw ValidationError(std::string(name) + ": label out of range");
        }
    }
}

}  // namespace

void DomainBundle::validate() const {
    check_labels(source, "source");
    check_labels(target_labeled, "target_labeled");
    const auto d = source.features.cols();
    if (d < 1) {
        throw ValidationError("feature dimension must be at least 1");
    }
    if (target_labeled.features.cols() != d || target_unlabeled.cols() != d) {
        throw ValidationError("source has " + std::to_string(d) +
                              " features but target_labeled has " +
                              std::to_string(target_labeled.features.cols()) +
                              " and target_unlabeled has " +
                              std::to_string(target_unlabeled.cols()));
    }
    if (source.labels.num_classes != target_labeled.labels.num_classes) {
        throw ValidationError("source and target_labeled disagree on the class count");
    }
    if (source.labels.num_classes < 2) {
        throw ValidationError("at least two classes are required");
    }
    const auto counts = target_labeled.labels.counts();
    for (std::size_t c = 0; c < counts.size(); ++c) {
        if (counts[c] == 0) {
            throw ValidationError("class " + std::to_string(c) +
                                  " has no labeled target sample");
        }
    }
    require_finite(source.features, "source");
    require_finite(target_labeled.features, "target_labeled");
    require_finite(target_unlabeled, "target_unlabeled");
}

void require_finite(const Matrix& m, const char* what) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (!std::isfinite(m(r, c))) {
                throw ValidationError(std::string(what) + ": non-finite value at row " +
                                      std::to_string(r) + ", column " + std::to_string(c));
            }
        }
    }
}

int argmax(const Eigen::Ref<const RowVector>& row) {
    int best = 0;
    for (Eigen::Index j = 1; j < row.size(); ++j) {
        if (row(j) > row(best)) {
            best = static_cast<int>(j);
        }
    }
    return best;
}

std::vector<int> row_argmax(const Matrix& scores) {
    std::vector<int> out(static_cast<std::size_t>(scores.rows()));
    for (Eigen::Index n = 0; n < scores.rows(); ++n) {
        out[static_cast<std::size_t>(n)] = argmax(scores.row(n));
    }
    return out;
}

RowVector column_mean(const Matrix& m) {
    if (m.rows() == 0) {
        return RowVector::Zero(m.cols());
    }
    return m.colwise().mean();
}

RowVector column_std(const Matrix& m) {
    if (m.rows() == 0) {
        return RowVector::Zero(m.cols());
    }
    const RowVector mean = column_mean(m);
    RowVector var = (m.rowwise() - mean).array().square().colwise().sum();
    var /= static_cast<double>(m.rows());
    return var.array().sqrt();
}

}  // namespace sstb
