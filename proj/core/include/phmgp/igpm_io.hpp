#pragma once

#include <filesystem>
#include <string>

#include "phmgp/igpm.hpp"

namespace phmgp {

/// JSON serialization of an inferred model.  Floating-point fields survive a
/// round trip bit-exactly.  Structural problems raise SchemaError.
std::string model_to_json(const IgpmModel& model);
IgpmModel model_from_json(const std::string& text);

void save_model(const IgpmModel& model, const std::filesystem::path& path);
IgpmModel load_model(const std::filesystem::path& path);

}  // namespace phmgp
