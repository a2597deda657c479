#pragma once

#include <filesystem>
#include <string_view>

namespace irbench {

inline constexpr int kIndexFormatVersion = 1;
inline constexpr std::string_view kIndexFormatName = "irbench-index";

enum class IndexKind { bm25, impact, dense };

std::string_view to_string(IndexKind kind);

/// Reads `<dir>/manifest.json` and checks format name and version.
IndexKind read_index_kind(const std::filesystem::path& dir);

}  // namespace irbench
