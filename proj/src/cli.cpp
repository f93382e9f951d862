#include "magbill/cli.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>

#include "magbill/errors.hpp"

namespace magbill::cli {
namespace {

double metadata_double(const Metadata& meta, const std::string& key, const std::filesystem::path& source) {
    const auto text = metadata_value(meta, key);
    if (!text) throw IoError(source.string() + ": metadata lacks '" + key + "'");
    if (*text == "inf") return std::numeric_limits<double>::infinity();
    double value = 0.0;
    const auto res = std::from_chars(text->data(), text->data() + text->size(), value);
    if (res.ec != std::errc{} || res.ptr != text->data() + text->size())
        throw IoError(source.string() + ": metadata '" + key + "' is not a number");
    return value;
}

std::uint64_t metadata_u64(const Metadata& meta, const std::string& key, const std::filesystem::path& source) {
    const auto text = metadata_value(meta, key);
    if (!text) throw IoError(source.string() + ": metadata lacks '" + key + "'");
    std::uint64_t value = 0;
    const auto res = std::from_chars(text->data(), text->data() + text->size(), value);
    if (res.ec != std::errc{} || res.ptr != text->data() + text->size())
        throw IoError(source.string() + ": metadata '" + key + "' is not an integer");
    return value;
}

void set_entry(Metadata& meta, const std::string& key, const std::string& value) {
    for (auto& [k, v] : meta) {
        if (k == key) {
            v = value;
            return;
        }
    }
    meta.emplace_back(key, value);
}

std::string_view palette_name(PaletteMode mode) { return mode == PaletteMode::RandomPerOrbit ? "random" : "fixed"; }

}  // namespace

void CliConfig::validate() const {
    if (!std::isfinite(field_B)) throw InvalidConfig("magnetic field must be finite");
    if (!(tolerance > 0.0 && tolerance <= 1e-3)) throw InvalidConfig("tolerance must lie in (0, 1e-3]");
    if (!(cutoff_delta >= 0.0 && cutoff_delta < 0.5 * std::numbers::pi))
        throw InvalidConfig("cutoff delta must lie in [0, pi/2)");
    if (subcommand == Subcommand::Simulate) {
        if (number_of_orbits < 1 || points_per_orbit < 1)
            throw InvalidConfig("orbit and point counts must be at least 1");
        if (!semi_axis_b && !eccentricity_epsilon)
            throw InvalidConfig("provide either --semi-axis-b or --eccentricity");
    }
}

ResolvedGeometry resolve_geometry(const CliConfig& config) {
    std::vector<std::string> warnings;
    if (config.semi_axis_b) {
        if (config.eccentricity_epsilon)
            warnings.push_back("both --semi-axis-b and --eccentricity given; using the semi-axis");
        return {BoundaryCurve(config.semi_axis_a, *config.semi_axis_b, config.power_p), std::move(warnings)};
    }
    if (!config.eccentricity_epsilon) throw InvalidConfig("provide either --semi-axis-b or --eccentricity");
    const double eps = *config.eccentricity_epsilon;
    const double p = config.power_p;
    if (!std::isfinite(eps)) throw InvalidGeometry("eccentricity must be finite");
    const double b = 10.0 * std::pow(std::fabs(1.0 - eps * eps), 1.0 / p);
    if (!(b > 0.0)) throw InvalidGeometry("eccentricity 1 collapses the table (b = 0)");
    if (eps > 1.0)
        warnings.push_back("eccentricity > 1: |x|^p + |y|^p/(1-eps^2) = 10^p bounds no domain; using the "
                           "convention a = 10, b = 10*|1-eps^2|^(1/p)");
    else
        warnings.push_back("eccentricity mapped by the convention a = 10, b = 10*|1-eps^2|^(1/p)");
    return {BoundaryCurve(10.0, b, p), std::move(warnings)};
}

const std::vector<ExamplePreset>& example_presets() {
    static const std::vector<ExamplePreset> presets{
        {"0", 0.0, 1.5, 2.0, 1000, 1000, 1000, PaletteMode::FixedSix},
        {"1", 0.01, 1.5, 2.0, 1000, 1000, 2000, PaletteMode::FixedSix},
        {"2", 0.5, 1.5, 2.0, 1000, 1000, 500, PaletteMode::FixedSix},
        {"3", 1.0, 1.5, 2.0, 1000, 1000, 500, PaletteMode::FixedSix},
        {"4", 2.0, 1.5, 2.0, 1000, 1000, 500, PaletteMode::FixedSix},
        {"5", 0.0, 1.5, 2.005, 1000, 1000, 1000, PaletteMode::FixedSix},
        // Same table count as example 3.
        {"all", 1.0, 1.5, 2.0, 2000, 3000, 500, PaletteMode::RandomPerOrbit},
    };
    return presets;
}

const ExamplePreset& find_preset(std::string_view name) {
    for (const ExamplePreset& p : example_presets())
        if (p.name == name) return p;
    throw InvalidConfig("unknown example '" + std::string(name) + "' (expected 0..5 or all)");
}

CliConfig apply_preset(const ExamplePreset& preset, const CliConfig& base) {
    CliConfig c = base;
    c.subcommand = Subcommand::Simulate;
    c.field_B = preset.field_B;
    c.semi_axis_a = 10.0;
    c.semi_axis_b.reset();
    c.eccentricity_epsilon = preset.eccentricity;
    c.power_p = preset.power_p;
    c.number_of_orbits = preset.number_of_orbits;
    c.points_per_orbit = preset.points_per_orbit;
    c.points_on_table = preset.points_on_table;
    c.palette_mode = preset.palette_mode;
    return c;
}

EnsembleConfig make_ensemble_config(const CliConfig& config, const BoundaryCurve& curve) {
    EnsembleConfig e;
    e.curve = curve;
    e.field = FieldParams(config.field_B);
    e.number_of_orbits = config.number_of_orbits;
    e.points_per_orbit = config.points_per_orbit;
    e.cutoff_delta = config.cutoff_delta;
    e.tolerance = config.tolerance;
    e.master_seed = config.master_seed;
    e.highlight_count = config.highlight_count;
    e.threads = config.threads;
    return e;
}

void simulate(const CliConfig& config, std::ostream& log) {
    config.validate();
    const ResolvedGeometry geometry = resolve_geometry(config);
    for (const std::string& w : geometry.warnings) log << "warning: " << w << '\n';

    const EnsembleConfig ensemble = make_ensemble_config(config, geometry.curve);
    const std::vector<OrbitRecord> records = run_ensemble(ensemble);

    std::error_code ec;
    std::filesystem::create_directories(config.output_directory, ec);
    if (ec) throw IoError("cannot create " + config.output_directory.string() + ": " + ec.message());

    write_orbit_data(records, config.output_directory / kDataFile);

    Metadata meta = describe_ensemble(ensemble, records);
    if (config.eccentricity_epsilon && !config.semi_axis_b)
        meta.emplace_back("eccentricity", format_double(*config.eccentricity_epsilon));
    for (std::size_t i = 0; i < geometry.warnings.size(); ++i)
        meta.emplace_back("geometry_warning_" + std::to_string(i), geometry.warnings[i]);
    if (geometry.curve.low_smoothness()) meta.emplace_back("low_smoothness", "true");
    meta.emplace_back("points_on_table", std::to_string(config.points_on_table));
    meta.emplace_back("palette", std::string(palette_name(config.palette_mode)));
    write_metadata(meta, config.output_directory / kMetadataFile);

    log << "simulated " << records.size() << " orbits into " << config.output_directory.string() << '\n';
}

void plot(const CliConfig& config, const std::filesystem::path& run_directory, std::ostream& log) {
    const std::filesystem::path meta_path = run_directory / kMetadataFile;
    Metadata meta = read_metadata(meta_path);
    const BoundaryCurve curve(metadata_double(meta, "semi_axis_a", meta_path),
                              metadata_double(meta, "semi_axis_b", meta_path),
                              metadata_double(meta, "power_p", meta_path));
    const std::vector<OrbitRecord> records = read_orbit_data(run_directory / kDataFile);

    PlotStyle style;
    style.palette_mode = config.palette_mode;
    style.points_on_table = config.points_on_table;
    style.color_seed = metadata_u64(meta, "master_seed", meta_path);
    style.overlay_paths = config.overlay_paths;
    style.field = FieldParams(metadata_double(meta, "magnetic_field", meta_path));
    for (std::size_t i = 0; i < std::min(config.highlight_count, records.size()); ++i)
        style.highlighted_orbit_ids.push_back(records[i].orbit_id);

    const std::filesystem::path out_dir = config.output_directory.empty() ? run_directory : config.output_directory;
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());

    const RenderInfo portrait = render_phase_portrait(records, style, out_dir / kPortraitFile);
    const RenderInfo table = render_table_figure(curve, records, style, out_dir / kTableFile);

    set_entry(meta, "plot_palette", std::string(palette_name(style.palette_mode)));
    set_entry(meta, "plot_highlighted_orbits", std::to_string(style.highlighted_orbit_ids.size()));
    set_entry(meta, "plot_points_on_table", std::to_string(style.points_on_table));
    set_entry(meta, "plot_background_stride", std::to_string(portrait.background_stride));
    set_entry(meta, "plot_portrait_points", std::to_string(portrait.points_drawn));
    set_entry(meta, "plot_table_points", std::to_string(table.points_drawn));
    write_metadata(meta, out_dir / kMetadataFile);

    log << "rendered " << (out_dir / kPortraitFile).string() << " and " << (out_dir / kTableFile).string() << '\n';
}

std::filesystem::path run_example(std::string_view name, const CliConfig& base, std::ostream& log) {
    const ExamplePreset& preset = find_preset(name);
    CliConfig config = apply_preset(preset, base);
    config.output_directory = base.output_directory / ("example_" + preset.name);
    simulate(config, log);
    plot(config, config.output_directory, log);
    return config.output_directory;
}

}  // namespace magbill::cli
