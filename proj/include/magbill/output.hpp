#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "magbill/boundary.hpp"
#include "magbill/ensemble.hpp"

namespace magbill {

// --- orbit data ---------------------------------------------------------

inline constexpr std::string_view kOrbitCsvHeader = "orbit_id,step_index,theta_pos,theta_vel,x,y";

/// Locale-independent decimal text with 17 significant digits.
std::string format_double(double value);

/// One header line and one row per recorded point. Throws IoError.
void write_orbit_data(const std::vector<OrbitRecord>& records, const std::filesystem::path& destination);

/// Parses a file written by write_orbit_data. Seeds and flags are not stored
/// there and come back zeroed. Throws IoError.
std::vector<OrbitRecord> read_orbit_data(const std::filesystem::path& source);

/// Ordered key=value lines.
using Metadata = std::vector<std::pair<std::string, std::string>>;

void write_metadata(const Metadata& entries, const std::filesystem::path& destination);
Metadata read_metadata(const std::filesystem::path& source);
std::optional<std::string> metadata_value(const Metadata& entries, const std::string& key);

/// Full description of an ensemble run for the sibling metadata file.
Metadata describe_ensemble(const EnsembleConfig& config, const std::vector<OrbitRecord>& records);

// --- figures ------------------------------------------------------------

enum class PaletteMode { FixedSix, RandomPerOrbit };

struct PlotStyle {
    std::vector<std::size_t> highlighted_orbit_ids;
    PaletteMode palette_mode = PaletteMode::FixedSix;
    double background_point_size = 1.2;
    double highlight_point_size = 2.4;
    std::size_t points_on_table = 0;
    std::uint64_t color_seed = 0;
    /// Above this many background points the portrait plots an even stride.
    std::size_t max_background_points = 2'000'000;
    /// Debug overlay of the chords / Larmor arcs between table points.
    bool overlay_paths = false;
    FieldParams field;

    /// Throws InvalidConfig on duplicate highlight ids.
    void validate() const;
};

/// Okabe-Ito derived six-color palette, fixed order.
const std::vector<std::string>& fixed_palette();

/// Color of an orbit under the style; gray for background orbits in fixed mode.
std::string orbit_color(const PlotStyle& style, std::size_t orbit_id);

struct RenderInfo {
    std::size_t background_stride = 1;
    std::size_t points_drawn = 0;
};

/// Scatter of (theta_pos, theta_vel) over [0, 2 pi] x [-pi/2, pi/2]. Throws IoError.
RenderInfo render_phase_portrait(const std::vector<OrbitRecord>& records, const PlotStyle& style,
                                 const std::filesystem::path& destination);

/// Boundary polyline plus the first points_on_table reflection points of every
/// highlighted orbit, equal aspect ratio. Throws IoError.
RenderInfo render_table_figure(const BoundaryCurve& curve, const std::vector<OrbitRecord>& records,
                               const PlotStyle& style, const std::filesystem::path& destination);

}  // namespace magbill
