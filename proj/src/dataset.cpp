#include "sstb/dataset.hpp"

#include "sstb/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <string_view>

namespace sstb {

namespace {

std::vector<std::string_view> split_row(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        out.push_back(line.substr(start, comma == std::string_view::npos ? comma : comma - start));
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

double parse_double(std::string_view token, std::size_t line) {
    token = trim(token);
    if (!token.empty() && token.front() == '+') {
        token.remove_prefix(1);
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size() || token.empty()) {
        throw ParseError("cannot parse '" + std::string(token) + "' as a number", line);
    }
    if (!std::isfinite(value)) {
        throw ValidationError("non-finite value '" + std::string(token) + "' in row at line " +
                              std::to_string(line));
    }
    return value;
}

int parse_label(std::string_view token, std::size_t line) {
    token = trim(token);
    int value = -1;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size() || value < 0) {
        throw ParseError("label '" + std::string(token) + "' is not a non-negative integer", line);
    }
    return value;
}

}  // namespace

LoadedFeatures parse_features(std::istream& in, bool has_labels, std::optional<int> num_classes) {
    std::string line;
    if (!std::getline(in, line)) {
        throw ParseError("missing header row", 1);
    }
    const auto header = split_row(line);
    const std::size_t total_cols = header.size();
    const std::size_t d = has_labels ? total_cols - 1 : total_cols;
    if (d < 1) {
        throw ParseError("header declares no feature columns", 1);
    }
    for (std::size_t c = 0; c < d; ++c) {
        if (trim(header[c]) != "f" + std::to_string(c)) {
            throw ParseError("expected header column 'f" + std::to_string(c) + "', got '" +
                                 std::string(trim(header[c])) + "'",
                             1);
        }
    }
    if (has_labels && trim(header.back()) != "label") {
        throw ParseError("last header column must be 'label'", 1);
    }

    std::vector<double> values;
    std::vector<int> labels;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        const auto cells = split_row(line);
        if (cells.size() != total_cols) {
            throw ParseError("expected " + std::to_string(total_cols) + " columns, got " +
                                 std::to_string(cells.size()),
                             line_no);
        }
        for (std::size_t c = 0; c < d; ++c) {
            values.push_back(parse_double(cells[c], line_no));
        }
        if (has_labels) {
            const int label = parse_label(cells.back(), line_no);
            if (num_classes && label >= *num_classes) {
                throw ValidationError("label " + std::to_string(label) + " at line " +
                                      std::to_string(line_no) + " exceeds class count " +
                                      std::to_string(*num_classes));
            }
            labels.push_back(label);
        }
    }

    const auto rows = static_cast<Eigen::Index>(values.size() / d);
    LoadedFeatures out;
    out.features = Eigen::Map<const Matrix>(values.data(), rows, static_cast<Eigen::Index>(d));
    if (has_labels) {
        OneHotLabels y;
        y.num_classes = num_classes.value_or(
            labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1);
        y.classes = std::move(labels);
        out.labels = std::move(y);
    }
    return out;
}

LoadedFeatures load_features(const std::filesystem::path& path, bool has_labels,
                             std::optional<int> num_classes) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("cannot open " + path.string());
    }
    return parse_features(in, has_labels, num_classes);
}

void write_features(std::ostream& out, const FeatureMatrix& features, const OneHotLabels* labels) {
    std::string buf;
    for (Eigen::Index c = 0; c < features.cols(); ++c) {
        buf += (c ? ",f" : "f") + std::to_string(c);
    }
    if (labels) {
        buf += ",label";
    }
    buf += '\n';
    for (Eigen::Index r = 0; r < features.rows(); ++r) {
        for (Eigen::Index c = 0; c < features.cols(); ++c) {
            if (c) {
                buf += ',';
            }
            buf += fmt::format("{:.17g}", features(r, c));
        }
        if (labels) {
            buf += ',' + std::to_string(labels->classes[static_cast<std::size_t>(r)]);
        }
        buf += '\n';
    }
    out << buf;
}

void save_features(const std::filesystem::path& path, const FeatureMatrix& features,
                   const OneHotLabels* labels) {
    std::ofstream out(path);
    if (!out) {
        throw ValidationError("cannot write " + path.string());
    }
    write_features(out, features, labels);
}

ShiftBenchmark make_shift_benchmark(const ShiftBenchmarkConfig& cfg) {
    const int J = cfg.num_classes;
    const int d = cfg.dims;
    if (J < 2 || d < 2) {
        throw ConfigError("shift benchmark needs at least 2 classes and 2 dimensions");
    }
    if (cfg.n_shot < 1 || cfg.n_source < 1 || cfg.shift < 0.0) {
        throw ConfigError("shift benchmark needs n_shot >= 1, n_source >= 1 and shift >= 0");
    }
    if (static_cast<long>(cfg.n_shot) * J > cfg.n_target) {
        throw ConfigError("n_shot * classes (" + std::to_string(cfg.n_shot * J) +
                          ") exceeds n_target (" + std::to_string(cfg.n_target) + ")");
    }
    if (cfg.source_label_noise < 0.0 || cfg.source_label_noise > 1.0) {
        throw ConfigError("source_label_noise must lie in [0, 1]");
    }

    Rng rng(cfg.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    auto gaussian = [&](Eigen::Index rows, Eigen::Index cols) {
        Matrix m(rows, cols);
        for (Eigen::Index r = 0; r < rows; ++r) {
            for (Eigen::Index c = 0; c < cols; ++c) {
                m(r, c) = normal(rng);
            }
        }
        return m;
    };

    Matrix means = gaussian(J, d);
    for (int j = 0; j < J; ++j) {
        means.row(j) *= cfg.class_separation / means.row(j).norm();
    }

    // Rotation plane spanned by the first two class means.
    RowVector u = means.row(0).normalized();
    RowVector v = means.row(1) - means.row(1).dot(u) * u;
    if (v.norm() < 1e-12) {
        v = RowVector::Unit(d, u.cwiseAbs().minCoeff() == std::abs(u(0)) ? 0 : 1);
        v -= v.dot(u) * u;
    }
    v.normalize();
    const double cos_t = std::cos(cfg.shift);
    const double sin_t = std::sin(cfg.shift);
    // R = I + (cos-1)(uu' + vv') + sin(vu' - uv'), acting on row vectors as x * R'.
    Matrix rot = Matrix::Identity(d, d);
    rot += (cos_t - 1.0) * (u.transpose() * u + v.transpose() * v);
    rot += sin_t * (v.transpose() * u - u.transpose() * v);
    RowVector direction = gaussian(1, d).row(0).normalized();
    const RowVector translation = cfg.shift * direction;

    auto draw = [&](const std::vector<int>& classes, bool target) {
        Matrix x = gaussian(static_cast<Eigen::Index>(classes.size()), d);
        for (std::size_t n = 0; n < classes.size(); ++n) {
            x.row(static_cast<Eigen::Index>(n)) += means.row(classes[n]);
        }
        if (target) {
            x = x * rot.transpose();
            x.rowwise() += translation;
        }
        return x;
    };

    ShiftBenchmark out;
    auto& bundle = out.bundle;

    std::vector<int> source_classes(static_cast<std::size_t>(cfg.n_source));
    for (int n = 0; n < cfg.n_source; ++n) {
        source_classes[static_cast<std::size_t>(n)] = n % J;
    }
    bundle.source.features = draw(source_classes, false);
    if (cfg.source_label_noise > 0.0) {
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        std::uniform_int_distribution<int> other(1, J - 1);
        for (auto& c : source_classes) {
            if (unit(rng) < cfg.source_label_noise) {
                c = (c + other(rng)) % J;
            }
        }
    }
    bundle.source.labels = {source_classes, J};

    // Target: n_shot per class labeled, the rest alternates unlabeled / test.
    std::vector<int> target_classes(static_cast<std::size_t>(cfg.n_target));
    for (int n = 0; n < cfg.n_target; ++n) {
        target_classes[static_cast<std::size_t>(n)] = n % J;
    }
    const Matrix target = draw(target_classes, true);
    const int n_labeled = cfg.n_shot * J;
    std::vector<int> labeled_classes(target_classes.begin(), target_classes.begin() + n_labeled);
    bundle.target_labeled.features = target.topRows(n_labeled);
    bundle.target_labeled.labels = {labeled_classes, J};

    std::vector<Eigen::Index> unlabeled_rows;
    std::vector<Eigen::Index> test_rows;
    for (Eigen::Index n = n_labeled; n < cfg.n_target; ++n) {
        (((n - n_labeled) / J) % 2 == 0 ? unlabeled_rows : test_rows).push_back(n);
    }
    bundle.target_unlabeled = target(unlabeled_rows, Eigen::all);
    out.test.features = target(test_rows, Eigen::all);
    out.test.labels.num_classes = J;
    for (auto r : test_rows) {
        out.test.labels.classes.push_back(target_classes[static_cast<std::size_t>(r)]);
    }
    return out;
}

}  // namespace sstb
