#include "irbench/index_manifest.hpp"

#include <fstream>

#include <fmt/format.h>

#include "irbench/errors.hpp"
#include "manifest_io.hpp"

namespace irbench {

using nlohmann::json;

std::string_view to_string(IndexKind kind) {
    switch (kind) {
        case IndexKind::bm25:
            return "bm25";
        case IndexKind::impact:
            return "impact";
        case IndexKind::dense:
            return "dense";
    }
    return "unknown";
}

IndexKind read_index_kind(const std::filesystem::path& dir) {
    auto manifest = detail::read_manifest(dir);
    auto kind = manifest.at("kind").get<std::string>();
    for (auto k : {IndexKind::bm25, IndexKind::impact, IndexKind::dense}) {
        if (kind == to_string(k)) {
            return k;
        }
    }
    throw DataError(fmt::format("{}: unknown index kind \"{}\"", dir.string(), kind));
}

namespace detail {

json manifest_header(IndexKind kind) {
    return json{{"format", kIndexFormatName}, {"version", kIndexFormatVersion},
                {"kind", to_string(kind)}};
}

void write_manifest(const std::filesystem::path& dir, const json& manifest) {
    // Written last and renamed into place, so a directory with a manifest is complete.
    auto tmp = dir / "manifest.json.tmp";
    {
        std::ofstream out(tmp);
        if (!out) {
            throw DataError(fmt::format("cannot write {}", tmp.string()));
        }
        out << manifest.dump(2) << '\n';
    }
    std::filesystem::rename(tmp, dir / "manifest.json");
}

json read_manifest(const std::filesystem::path& dir) {
    auto path = dir / "manifest.json";
    std::ifstream in(path);
    if (!in) {
        throw DataError(fmt::format("{} is not an index directory (no manifest.json)", dir.string()));
    }
    json manifest;
    try {
        manifest = json::parse(in);
    } catch (const json::parse_error& e) {
        throw DataError(fmt::format("{}: {}", path.string(), e.what()));
    }
    if (manifest.value("format", "") != kIndexFormatName) {
        throw DataError(fmt::format("{}: not an irbench index manifest", path.string()));
    }
    if (manifest.value("version", 0) != kIndexFormatVersion) {
        throw DataError(fmt::format("{}: unsupported index version {}", path.string(),
                                    manifest.value("version", 0)));
    }
    return manifest;
}

json read_manifest(const std::filesystem::path& dir, IndexKind expected) {
    auto manifest = read_manifest(dir);
    if (manifest.value("kind", "") != to_string(expected)) {
        throw DataError(fmt::format("{}: expected a {} index, found {}", dir.string(),
                                    to_string(expected), manifest.value("kind", "?")));
    }
    return manifest;
}

json analyzer_to_json(const Analyzer& analyzer) {
    const auto& cfg = analyzer.config();
    json j{{"mode", to_string(cfg.mode)}, {"fingerprint", analyzer.fingerprint()}};
    if (cfg.mode == AnalyzerMode::english) {
        j["stopwords"] = cfg.stopwords;
    } else if (cfg.mode == AnalyzerMode::wordpiece) {
        j["unknown"] = cfg.vocab->unknown();
        j["vocab"] = "vocab.txt";
    }
    return j;
}

void write_analyzer_files(const Analyzer& analyzer, const std::filesystem::path& dir) {
    const auto& cfg = analyzer.config();
    if (cfg.mode != AnalyzerMode::wordpiece) {
        return;
    }
    std::ofstream out(dir / "vocab.txt");
    for (const auto& t : cfg.vocab->tokens()) {
        out << t << '\n';
    }
    if (!out) {
        throw DataError(fmt::format("cannot write {}", (dir / "vocab.txt").string()));
    }
}

AnalyzerConfig analyzer_from_json(const json& j, const std::filesystem::path& dir) {
    AnalyzerConfig cfg;
    cfg.mode = parse_analyzer_mode(j.at("mode").get<std::string>());
    if (cfg.mode == AnalyzerMode::english && j.contains("stopwords")) {
        cfg.stopwords = j.at("stopwords").get<std::set<std::string>>();
    }
    if (cfg.mode == AnalyzerMode::wordpiece) {
        cfg.vocab = std::make_shared<const Vocab>(
            Vocab::load(dir / j.value("vocab", "vocab.txt"), j.value("unknown", "[UNK]")));
    }
    return cfg;
}

void write_doc_ids(const std::filesystem::path& path, const std::vector<std::string>& ids) {
    std::ofstream out(path);
    for (const auto& id : ids) {
        out << id << '\n';
    }
    if (!out) {
        throw DataError(fmt::format("cannot write {}", path.string()));
    }
}

std::vector<std::string> read_doc_ids(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw DataError(fmt::format("cannot open {}", path.string()));
    }
    std::vector<std::string> ids;
    std::string line;
    while (std::getline(in, line)) {
        ids.push_back(line);
    }
    return ids;
}

}  // namespace detail
}  // namespace irbench
