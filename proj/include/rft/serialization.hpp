#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include <json.hpp>

#include "rft/forest.hpp"

namespace rft {

inline constexpr int model_format_version = 1;

nlohmann::json schema_to_json(const Schema& schema);
Schema schema_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Forest& forest);
Forest forest_from_json(const nlohmann::json& j);

std::string serialize(const Forest& forest);

/// Parses a model document. Throws DataError naming the byte offset for
/// syntax errors and the JSON path for structural errors.
Forest deserialize(std::string_view text);

void save_forest(const Forest& forest, const std::filesystem::path& path);
Forest load_forest(const std::filesystem::path& path);

}  // namespace rft
