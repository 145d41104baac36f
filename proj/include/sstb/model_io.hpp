#pragma once

#include "sstb/trainer.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>

namespace sstb {

inline constexpr int kModelFormatVersion = 1;

nlohmann::json to_json(const LinearModel& model);
LinearModel linear_model_from_json(const nlohmann::json& j);

/// Model file: format_version, J, d, ns, lr, activation, initial, blocks.
/// A file with no blocks doubles as a plain linear-layer export.
nlohmann::json to_json(const EnsembleModel& model);
EnsembleModel ensemble_from_json(const nlohmann::json& j);

std::string dump_model(const EnsembleModel& model);
void save_model(const std::filesystem::path& path, const EnsembleModel& model);
/// Throws ValidationError on unreadable or malformed files.
EnsembleModel load_model(const std::filesystem::path& path);

}  // namespace sstb
