#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "magbill/boundary.hpp"
#include "magbill/ensemble.hpp"
#include "magbill/output.hpp"

namespace magbill::cli {

enum class Subcommand { Simulate, Plot, Verify, Example };

inline constexpr std::uint64_t kDefaultSeed = 20240601;

struct CliConfig {
    Subcommand subcommand = Subcommand::Simulate;
    double field_B = 0.0;
    double semi_axis_a = 10.0;
    std::optional<double> semi_axis_b;
    std::optional<double> eccentricity_epsilon;
    double power_p = 2.0;
    std::size_t number_of_orbits = 1000;
    std::size_t points_per_orbit = 1000;
    std::size_t points_on_table = 1000;
    double cutoff_delta = 0.01;
    double tolerance = kDefaultTolerance;
    std::uint64_t master_seed = kDefaultSeed;
    std::size_t highlight_count = 6;
    PaletteMode palette_mode = PaletteMode::FixedSix;
    std::filesystem::path output_directory = "magbill_out";
    bool overlay_paths = false;
    unsigned threads = 0;

    /// Throws InvalidConfig.
    void validate() const;
};

struct ResolvedGeometry {
    BoundaryCurve curve;
    std::vector<std::string> warnings;
};

/// Semi-axes pass through; an eccentricity maps to a = 10,
/// b = 10 |1 - eps^2|^(1/p). Throws InvalidGeometry / InvalidConfig.
ResolvedGeometry resolve_geometry(const CliConfig& config);

/// Built-in example configurations.
struct ExamplePreset {
    std::string name;  ///< "0".."5" or "all"
    double field_B;
    double eccentricity;
    double power_p;
    std::size_t number_of_orbits;
    std::size_t points_per_orbit;
    std::size_t points_on_table;
    PaletteMode palette_mode;
};

const std::vector<ExamplePreset>& example_presets();

/// Throws InvalidConfig for unknown names.
const ExamplePreset& find_preset(std::string_view name);

/// Preset parameters layered over the run-level settings of `base` (seed,
/// tolerance, delta, threads, output directory, highlight count, overlay).
CliConfig apply_preset(const ExamplePreset& preset, const CliConfig& base);

EnsembleConfig make_ensemble_config(const CliConfig& config, const BoundaryCurve& curve);

inline constexpr std::string_view kDataFile = "orbits.csv";
inline constexpr std::string_view kMetadataFile = "metadata.txt";
inline constexpr std::string_view kPortraitFile = "phase_portrait.svg";
inline constexpr std::string_view kTableFile = "table.svg";

/// Runs the ensemble and writes the data and metadata files into
/// config.output_directory.
void simulate(const CliConfig& config, std::ostream& log);

/// Renders both figures from a directory produced by simulate().
void plot(const CliConfig& config, const std::filesystem::path& run_directory, std::ostream& log);

/// simulate + plot for a preset into base.output_directory / "example_<name>".
std::filesystem::path run_example(std::string_view name, const CliConfig& base, std::ostream& log);

}  // namespace magbill::cli
