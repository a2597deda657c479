#include "irbench/radar.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <fmt/format.h>

#include "irbench/errors.hpp"

namespace irbench {

namespace {

constexpr double kLabelGap = 14.0;
constexpr double kTickHalfLength = 5.0;
constexpr const char* kBaselineColor = "#222222";
constexpr const char* kGridColor = "#c8c8c8";

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        auto tab = line.find('\t', start);
        out.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
        if (tab == std::string::npos) {
            break;
        }
        start = tab + 1;
    }
    for (auto& cell : out) {
        auto b = cell.find_first_not_of(" \r");
        auto e = cell.find_last_not_of(" \r");
        cell = b == std::string::npos ? "" : cell.substr(b, e - b + 1);
    }
    return out;
}

double parse_score(const std::string& text, const std::filesystem::path& path, std::size_t line) {
    char* end = nullptr;
    double v = std::strtod(text.c_str(), &end);
    if (text.empty() || end != text.c_str() + text.size() || !std::isfinite(v)) {
        throw DataError(fmt::format("{}:{}: bad score \"{}\"", path.string(), line, text));
    }
    return v;
}

std::string xml_escape(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&':
                out += "&amp;";
                break;
            case '<':
                out += "&lt;";
                break;
            case '>':
                out += "&gt;";
                break;
            case '"':
                out += "&quot;";
                break;
            case '\'':
                out += "&apos;";
                break;
            default:
                out.push_back(c);
        }
    }
    return out;
}

std::string num(double v) {
    // avoid "-0.000000"
    if (std::abs(v) < 5e-7) {
        v = 0.0;
    }
    return fmt::format("{:.6f}", v);
}

double radians(double degrees) { return degrees * std::numbers::pi / 180.0; }

}  // namespace

const std::vector<std::string>& radar_palette() {
    static const std::vector<std::string> colors = {
        "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
        "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
    };
    return colors;
}

MetricsTable load_metrics(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw DataError(fmt::format("cannot open {}", path.string()));
    }
    MetricsTable table;
    std::vector<std::string> header;
    bool wide = false;
    bool first = true;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') {
            continue;
        }
        auto cells = split_tabs(line);
        if (first) {
            first = false;
            std::string head = cells[0];
            std::transform(head.begin(), head.end(), head.begin(),
                           [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
            if (head == "dataset") {
                wide = true;
                header = cells;
                if (header.size() < 2) {
                    throw DataError(fmt::format("{}: header names no models", path.string()));
                }
                continue;
            }
            if (head == "model" && cells.size() == 3) {
                continue;
            }
        }
        if (wide) {
            if (cells.size() != header.size()) {
                throw DataError(fmt::format("{}:{}: expected {} columns, got {}", path.string(),
                                            line_number, header.size(), cells.size()));
            }
            for (std::size_t c = 1; c < cells.size(); ++c) {
                table[header[c]][cells[0]] = parse_score(cells[c], path, line_number);
            }
        } else {
            if (cells.size() != 3) {
                throw DataError(fmt::format("{}:{}: expected `model<TAB>dataset<TAB>score`",
                                            path.string(), line_number));
            }
            table[cells[0]][cells[1]] = parse_score(cells[2], path, line_number);
        }
    }
    return table;
}

void RadarSpec::validate() const {
    if (axes.empty()) {
        throw DataError("radar chart needs at least one axis");
    }
    if (!(radius > 0.0)) {
        throw PreconditionError("radar radius must be > 0");
    }
    auto check = [&](const RadarSeries& s) {
        for (const auto& axis : axes) {
            auto it = s.scores.find(axis);
            if (it == s.scores.end()) {
                throw DataError(fmt::format("series \"{}\" has no score for axis \"{}\"", s.name, axis));
            }
            if (!(it->second >= 0.0)) {
                throw DataError(fmt::format("series \"{}\" has a negative score for axis \"{}\"",
                                            s.name, axis));
            }
        }
    };
    check(baseline);
    for (const auto& m : models) {
        check(m);
    }
}

RadarSpec radar_spec_from_table(const MetricsTable& table, const std::string& baseline,
                                const std::vector<std::string>& models,
                                std::span<const DatasetSpec> specs) {
    auto series_for = [&](const std::string& name) {
        auto it = table.find(name);
        if (it == table.end()) {
            throw DataError(fmt::format("metrics have no model \"{}\"", name));
        }
        RadarSeries s;
        s.name = name;
        for (const auto& [dataset, score] : it->second) {
            const auto* spec = find_dataset(specs, dataset);
            if (spec == nullptr) {
                throw DataError(fmt::format("model \"{}\": unknown dataset \"{}\"", name, dataset));
            }
            s.scores[spec->name] = score;
        }
        return s;
    };
    RadarSpec spec;
    for (const auto& d : specs) {
        spec.axes.push_back(d.name);
    }
    spec.baseline = series_for(baseline);
    std::vector<std::string> names = models;
    if (names.empty()) {
        for (const auto& [name, _] : table) {
            if (name != baseline) {
                names.push_back(name);
            }
        }
    }
    for (const auto& name : names) {
        spec.models.push_back(series_for(name));
    }
    spec.validate();
    return spec;
}

double radar_radius(double score, double baseline_score, double radius, RadarScaling scaling,
                    double additive_span) {
    if (!(radius > 0.0)) {
        throw PreconditionError("radar radius must be > 0");
    }
    if (!(score >= 0.0)) {
        throw PreconditionError(fmt::format("radar score must be >= 0 (got {})", score));
    }
    if (!(baseline_score >= 0.0)) {
        throw PreconditionError("radar baseline score must be >= 0");
    }
    const double half = radius / 2.0;
    double r = 0.0;
    if (scaling == RadarScaling::additive) {
        if (!(additive_span > 0.0)) {
            throw PreconditionError("additive span must be > 0");
        }
        r = half + half * (score - baseline_score) / additive_span;
    } else if (baseline_score == 0.0) {
        r = score == 0.0 ? half : radius;
    } else {
        r = half * (score / baseline_score);
    }
    return std::clamp(r, 0.0, radius);
}

double axis_angle_degrees(std::size_t i, std::size_t n) {
    return 90.0 - static_cast<double>(i) * 360.0 / static_cast<double>(n);
}

std::vector<RadarVertex> radar_polygon(const RadarSpec& spec, const RadarSeries& series) {
    std::vector<RadarVertex> out;
    out.reserve(spec.axes.size());
    for (std::size_t i = 0; i < spec.axes.size(); ++i) {
        const auto& axis = spec.axes[i];
        const double score = series.scores.at(axis);
        const double base = spec.baseline.scores.at(axis);
        const double r =
            radar_radius(score, base, spec.radius, spec.scaling, spec.additive_span);
        bool clamped = false;
        if (spec.scaling == RadarScaling::ratio) {
            clamped = base == 0.0 ? score > 0.0 : score / base > 2.0;
        } else {
            clamped = (score - base) / spec.additive_span > 1.0;
        }
        const double theta = radians(axis_angle_degrees(i, spec.axes.size()));
        out.push_back(RadarVertex{r * std::cos(theta), -r * std::sin(theta), r, clamped});
    }
    return out;
}

std::string render_radar(const RadarSpec& spec) {
    spec.validate();
    const double cx = spec.width / 2.0;
    const double cy = spec.height / 2.0 + (spec.title.empty() ? 0.0 : 12.0);
    const auto n = spec.axes.size();
    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg << fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}\" height=\"{}\" "
        "viewBox=\"0 0 {} {}\" font-family=\"Helvetica, Arial, sans-serif\">\n",
        num(spec.width), num(spec.height), num(spec.width), num(spec.height));
    svg << fmt::format("  <rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"#ffffff\"/>\n",
                       num(spec.width), num(spec.height));
    if (!spec.title.empty()) {
        svg << fmt::format("  <text x=\"{}\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">{}</text>\n",
                           num(cx), xml_escape(spec.title));
    }
    svg << fmt::format("  <g id=\"chart\" transform=\"translate({},{})\">\n", num(cx), num(cy));

    // grid
    svg << "    <g id=\"grid\" fill=\"none\">\n";
    svg << fmt::format("      <circle cx=\"0\" cy=\"0\" r=\"{}\" stroke=\"{}\"/>\n", num(spec.radius),
                       kGridColor);
    svg << fmt::format(
        "      <circle cx=\"0\" cy=\"0\" r=\"{}\" stroke=\"{}\" stroke-dasharray=\"2 3\"/>\n",
        num(spec.radius / 2.0), kGridColor);
    for (std::size_t i = 0; i < n; ++i) {
        const double theta = radians(axis_angle_degrees(i, n));
        svg << fmt::format(
            "      <line class=\"axis\" x1=\"0\" y1=\"0\" x2=\"{}\" y2=\"{}\" stroke=\"{}\"/>\n",
            num(spec.radius * std::cos(theta)), num(-spec.radius * std::sin(theta)), kGridColor);
    }
    svg << "    </g>\n";

    // axis labels
    svg << "    <g id=\"labels\" font-size=\"11\" fill=\"#333333\">\n";
    for (std::size_t i = 0; i < n; ++i) {
        const double theta = radians(axis_angle_degrees(i, n));
        const double lx = (spec.radius + kLabelGap) * std::cos(theta);
        const double ly = -(spec.radius + kLabelGap) * std::sin(theta);
        const double c = std::cos(theta);
        const char* anchor = c > 0.2 ? "start" : (c < -0.2 ? "end" : "middle");
        svg << fmt::format(
            "      <text x=\"{}\" y=\"{}\" text-anchor=\"{}\" dominant-baseline=\"middle\">{}</text>\n",
            num(lx), num(ly), anchor, xml_escape(spec.axes[i]));
    }
    svg << "    </g>\n";

    auto polygon = [&](const RadarSeries& series, const std::string& color, bool dashed,
                       const char* cls) {
        auto vertices = radar_polygon(spec, series);
        std::string points;
        for (std::size_t i = 0; i < vertices.size(); ++i) {
            if (i > 0) {
                points.push_back(' ');
            }
            points += num(vertices[i].x) + "," + num(vertices[i].y);
        }
        svg << fmt::format(
            "    <polygon class=\"{}\" data-series=\"{}\" points=\"{}\" fill=\"{}\" fill-opacity=\"0.06\" "
            "stroke=\"{}\" stroke-width=\"{}\"{}/>\n",
            cls, xml_escape(series.name), points, color, color, dashed ? "1.5" : "1.8",
            dashed ? " stroke-dasharray=\"3 3\"" : "");
        // Clamped vertices get a short tick across the axis so overflow stays visible.
        for (std::size_t i = 0; i < vertices.size(); ++i) {
            if (!vertices[i].clamped) {
                continue;
            }
            const double theta = radians(axis_angle_degrees(i, n));
            const double tx = -std::sin(theta) * kTickHalfLength;
            const double ty = -std::cos(theta) * kTickHalfLength;
            svg << fmt::format(
                "    <line class=\"overflow\" data-series=\"{}\" data-axis=\"{}\" x1=\"{}\" y1=\"{}\" "
                "x2=\"{}\" y2=\"{}\" stroke=\"{}\" stroke-width=\"2\"/>\n",
                xml_escape(series.name), xml_escape(spec.axes[i]), num(vertices[i].x + tx),
                num(vertices[i].y + ty), num(vertices[i].x - tx), num(vertices[i].y - ty), color);
        }
    };

    const auto& palette = radar_palette();
    polygon(spec.baseline, spec.baseline.color.empty() ? kBaselineColor : spec.baseline.color, true,
            "baseline");
    for (std::size_t m = 0; m < spec.models.size(); ++m) {
        const auto& s = spec.models[m];
        polygon(s, s.color.empty() ? palette[m % palette.size()] : s.color, false, "model");
    }
    svg << "  </g>\n";

    // legend
    svg << "  <g id=\"legend\" font-size=\"12\">\n";
    double ly = 20.0 + (spec.title.empty() ? 0.0 : 16.0);
    auto legend_row = [&](const RadarSeries& s, const std::string& color, bool dashed) {
        svg << fmt::format(
            "    <line x1=\"12\" y1=\"{}\" x2=\"36\" y2=\"{}\" stroke=\"{}\" stroke-width=\"2\"{}/>\n",
            num(ly), num(ly), color, dashed ? " stroke-dasharray=\"3 3\"" : "");
        svg << fmt::format("    <text x=\"42\" y=\"{}\" dominant-baseline=\"middle\">{}</text>\n",
                           num(ly), xml_escape(s.name));
        ly += 18.0;
    };
    legend_row(spec.baseline, spec.baseline.color.empty() ? kBaselineColor : spec.baseline.color, true);
    for (std::size_t m = 0; m < spec.models.size(); ++m) {
        const auto& s = spec.models[m];
        legend_row(s, s.color.empty() ? palette[m % palette.size()] : s.color, false);
    }
    svg << "  </g>\n";
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace irbench
