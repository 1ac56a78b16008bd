#pragma once

#include <filesystem>

#include <json.hpp>

#include "cgpt3d/cgpt.hpp"
#include "cgpt3d/descriptors.hpp"
#include "cgpt3d/msr.hpp"

namespace cgpt3d {

using Json = nlohmann::json;

/// Every document carries "schema": kSchemaVersion.
inline constexpr int kSchemaVersion = 1;

Json to_json(const CgptBlockMatrix& m);
Json to_json(const MsrDataset& d);
Json to_json(const ShapeDescriptor& d);
Json to_json(const Dictionary& d);

CgptBlockMatrix cgpt_from_json(const Json& j);
MsrDataset msr_from_json(const Json& j);
ShapeDescriptor descriptor_from_json(const Json& j);
Dictionary dictionary_from_json(const Json& j);

Json read_json(const std::filesystem::path& path);
/// Two-space indentation and a trailing newline; output is deterministic.
void write_json(const Json& j, const std::filesystem::path& path);

}  // namespace cgpt3d
