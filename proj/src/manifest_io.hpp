#pragma once

// Shared helpers for index directories.

#include <filesystem>
#include <string>
#include <vector>

#include "irbench/analysis.hpp"
#include "irbench/index_manifest.hpp"
#include "json.hpp"

namespace irbench::detail {

nlohmann::json manifest_header(IndexKind kind);
void write_manifest(const std::filesystem::path& dir, const nlohmann::json& manifest);
nlohmann::json read_manifest(const std::filesystem::path& dir);
nlohmann::json read_manifest(const std::filesystem::path& dir, IndexKind expected);

nlohmann::json analyzer_to_json(const Analyzer& analyzer);
void write_analyzer_files(const Analyzer& analyzer, const std::filesystem::path& dir);
AnalyzerConfig analyzer_from_json(const nlohmann::json& j, const std::filesystem::path& dir);

void write_doc_ids(const std::filesystem::path& path, const std::vector<std::string>& ids);
std::vector<std::string> read_doc_ids(const std::filesystem::path& path);

}  // namespace irbench::detail
