#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "irbench/dataset.hpp"

namespace irbench {

enum class RadarScaling {
    ratio,     // r = (R/2) * score / baseline
    additive,  // r = R/2 + (R/2) * (score - baseline) / additive_span
};

/// model -> dataset -> score
using MetricsTable = std::map<std::string, std::map<std::string, double>>;

/// Reads a tab-separated metrics file. Two layouts are accepted:
///   wide: header `dataset<TAB>model1<TAB>model2...`, one row per dataset;
///   long: `model<TAB>dataset<TAB>score` rows.
/// Blank lines and lines starting with `#` are ignored.
MetricsTable load_metrics(const std::filesystem::path& path);

struct RadarSeries {
    std::string name;
    std::map<std::string, double> scores;  // axis label -> score
    std::string color;                     // empty: palette default
};

struct RadarSpec {
    std::vector<std::string> axes;
    RadarSeries baseline;
    std::vector<RadarSeries> models;
    double radius = 200.0;
    double width = 720.0;
    double height = 640.0;
    RadarScaling scaling = RadarScaling::ratio;
    double additive_span = 0.25;
    std::string title;

    /// Throws DataError when an axis lacks a score or a score is negative.
    void validate() const;
};

/// Builds a spec whose axes are the registry datasets in display order.
/// Dataset names in `table` are matched leniently (case, punctuation,
/// accents and parenthesised suffixes are ignored).
RadarSpec radar_spec_from_table(const MetricsTable& table, const std::string& baseline,
                                const std::vector<std::string>& models,
                                std::span<const DatasetSpec> specs);

/// Radial distance for one axis, clamped to [0, R]. The baseline score maps to
/// R/2; a zero baseline sends 0 to R/2 and any positive score to R.
double radar_radius(double score, double baseline_score, double radius,
                    RadarScaling scaling = RadarScaling::ratio, double additive_span = 0.25);

/// Angle of axis i out of n, in degrees: 90 - i * 360 / n (top, clockwise).
double axis_angle_degrees(std::size_t i, std::size_t n);

struct RadarVertex {
    double x = 0.0;  // relative to the chart centre, SVG orientation (y down)
    double y = 0.0;
    double r = 0.0;
    bool clamped = false;  // the unclamped radius would exceed R
};

std::vector<RadarVertex> radar_polygon(const RadarSpec& spec, const RadarSeries& series);

/// Standalone SVG 1.1 document. Deterministic: the same spec yields the same bytes.
std::string render_radar(const RadarSpec& spec);

/// Default series colours, assigned to models in order.
const std::vector<std::string>& radar_palette();

}  // namespace irbench
