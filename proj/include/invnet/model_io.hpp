#pragma once

#include <filesystem>
#include <string>

#include "invnet/network.hpp"

namespace invnet {

inline constexpr int kModelFormatVersion = 1;

// JSON document:
//   { "format": "invnet-model", "format_version": 1, "input_dim", "padded",
//     "hidden_dim", "blocks": [ { "f": subnet, "g": subnet } ... ],
//     "w": [...], "b": x, "provenance": "..." }
// subnet = { "w1": {"rows", "cols", "values"}, "b1": [...], "w2": {...}, "b2": [...] }
// Matrices are row-major. Doubles are written with round-trip precision.
std::string model_to_json(const InvNetModel& model, const std::string& provenance = {});
InvNetModel model_from_json(const std::string& text, const std::string& source = "<model>");

void save_model(const std::filesystem::path& path, const InvNetModel& model,
                const std::string& provenance = {});
InvNetModel load_model(const std::filesystem::path& path);

}  // namespace invnet
