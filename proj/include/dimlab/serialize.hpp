#pragma once

#include <filesystem>
#include <iosfwd>

#include <json.hpp>

#include "dimlab/sets.hpp"

namespace dimlab {

enum class PointFormat { json, binary };

nlohmann::json to_json(const PointSet& x);
PointSet point_set_from_json(const nlohmann::json& j);

// Packed little-endian layout: "DLPS", u32 n, u64 count, f64 resolution, row-major f64.
void write_binary(std::ostream& os, const PointSet& x);
PointSet read_binary(std::istream& is);

void save_point_set(const std::filesystem::path& path, const PointSet& x, PointFormat fmt);
// Sniffs the magic bytes, so either format loads.
PointSet load_point_set(const std::filesystem::path& path);

nlohmann::json to_json(const CarpetSpec& spec);
CarpetSpec carpet_spec_from_json(const nlohmann::json& j);
CarpetSpec load_carpet_spec(const std::filesystem::path& path);

nlohmann::json read_json_file(const std::filesystem::path& path);

}  // namespace dimlab
