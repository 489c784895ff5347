#pragma once

#include <filesystem>
#include <string>
#include <variant>

#include "rboost/proj_boost.hpp"
#include "rboost/rank_boost.hpp"

namespace rboost {

/// Model file format version. Files with a newer major version are refused.
inline constexpr int kModelFormatMajor = 1;
inline constexpr int kModelFormatMinor = 0;

using AnyModel = std::variant<RankModel, ProjModel>;

/// Canonical JSON text: fixed field order, shortest round-trip doubles,
/// infinite thresholds as "-inf" / "+inf". Identical models give identical
/// bytes.
std::string model_to_json(const RankModel& model);
std::string model_to_json(const ProjModel& model);
std::string model_to_json(const AnyModel& model);

/// Throws DataError on malformed records or an unsupported version.
AnyModel model_from_json(const std::string& text);

void save_model(const AnyModel& model, const std::filesystem::path& path);
AnyModel load_model(const std::filesystem::path& path);

}  // namespace rboost
