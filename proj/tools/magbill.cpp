// magbill: magnetic billiards in superellipse tables.
//
//   magbill simulate --magnetic-field 0.5 --eccentricity 1.5 --out run/
//   magbill plot --in run/
//   magbill example 3 --out figures/
//   magbill verify
//
// Exit codes: 0 success, 1 verification failure, 2 invalid configuration,
// 3 runtime simulation error.
#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "magbill/cli.hpp"
#include "magbill/errors.hpp"
#include "magbill/verification.hpp"
#include "magbill/version.hpp"

namespace {

using magbill::cli::CliConfig;
using magbill::cli::Subcommand;

constexpr int kExitVerifyFailed = 1;
constexpr int kExitInvalidConfig = 2;
constexpr int kExitRuntime = 3;

void add_run_options(CLI::App& cmd, CliConfig& c) {
    cmd.add_option("--tol", c.tolerance, "boundary accuracy of the crossing solver")->capture_default_str();
    cmd.add_option("--delta", c.cutoff_delta, "cut-off keeping initial directions away from tangency")
        ->capture_default_str();
    cmd.add_option("--seed", c.master_seed, "64-bit master seed")->capture_default_str();
    cmd.add_option("--threads", c.threads, "worker threads (0 = all cores)")->capture_default_str();
}

void add_geometry_options(CLI::App& cmd, CliConfig& c) {
    cmd.add_option("--magnetic-field,-B", c.field_B, "field strength B (Larmor radius 1/|B|)")->capture_default_str();
    cmd.add_option("--semi-axis-a", c.semi_axis_a, "semi-axis along x")->capture_default_str();
    cmd.add_option("--semi-axis-b", c.semi_axis_b, "semi-axis along y");
    cmd.add_option("--eccentricity", c.eccentricity_epsilon,
                   "eps; maps to a = 10, b = 10*|1-eps^2|^(1/p) (used when --semi-axis-b is absent)");
    cmd.add_option("--power", c.power_p, "superellipse power p (> 1)")->capture_default_str();
}

void add_plot_options(CLI::App& cmd, CliConfig& c) {
    static const std::map<std::string, magbill::PaletteMode> palettes{
        {"fixed", magbill::PaletteMode::FixedSix}, {"random", magbill::PaletteMode::RandomPerOrbit}};
    cmd.add_option("--points-on-table", c.points_on_table, "reflections drawn on the table per highlighted orbit")
        ->capture_default_str();
    cmd.add_option("--highlight", c.highlight_count, "number of colored orbits")->capture_default_str();
    cmd.add_option("--palette", c.palette_mode, "fixed or random")
        ->transform(CLI::CheckedTransformer(palettes, CLI::ignore_case));
    cmd.add_flag("--overlay-paths", c.overlay_paths, "draw chords / Larmor arcs between table points");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Classical magnetic billiards in superellipse tables"};
    app.set_version_flag("--version", std::string(magbill::kVersion));
    app.require_subcommand(1);

    CliConfig config;
    std::filesystem::path input_directory;
    std::string example_name;

    auto* simulate = app.add_subcommand("simulate", "run an ensemble and write orbit data + metadata");
    add_geometry_options(*simulate, config);
    add_run_options(*simulate, config);
    add_plot_options(*simulate, config);
    simulate->add_option("--orbits", config.number_of_orbits, "number of orbits")->capture_default_str();
    simulate->add_option("--points-per-orbit", config.points_per_orbit, "reflections per orbit")
        ->capture_default_str();
    simulate->add_option("--out", config.output_directory, "output directory")->capture_default_str();

    auto* plot = app.add_subcommand("plot", "render the phase portrait and table figure of a run");
    add_plot_options(*plot, config);
    plot->add_option("--in", input_directory, "directory written by simulate")->required();
    plot->add_option("--out", config.output_directory, "figure directory (default: the input directory)");

    auto* example = app.add_subcommand("example", "run a built-in example configuration (0..5 or all)");
    example->add_option("name", example_name, "0, 1, 2, 3, 4, 5 or all")->required();
    add_run_options(*example, config);
    example->add_option("--highlight", config.highlight_count, "number of colored orbits")->capture_default_str();
    example->add_flag("--overlay-paths", config.overlay_paths, "draw chords / Larmor arcs between table points");
    example->add_option("--out", config.output_directory, "parent output directory")->capture_default_str();

    auto* verify = app.add_subcommand("verify", "run the invariant checks and report measured defects");
    add_geometry_options(*verify, config);
    add_run_options(*verify, config);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInvalidConfig;
    }

    try {
        if (simulate->parsed()) {
            config.subcommand = Subcommand::Simulate;
            magbill::cli::simulate(config, std::cerr);
        } else if (plot->parsed()) {
            config.subcommand = Subcommand::Plot;
            if (plot->count("--out") == 0) config.output_directory = input_directory;
            magbill::cli::plot(config, input_directory, std::cerr);
        } else if (example->parsed()) {
            config.subcommand = Subcommand::Example;
            config.validate();
            magbill::cli::run_example(example_name, config, std::cerr);
        } else if (verify->parsed()) {
            config.subcommand = Subcommand::Verify;
            config.validate();
            const auto report = magbill::verification::run_verification(config, std::cout);
            std::cout << (report.passed() ? "verify: all checks passed\n" : "verify: FAILED\n");
            return report.passed() ? 0 : kExitVerifyFailed;
        }
    } catch (const magbill::InvalidConfig& e) {
        std::cerr << "invalid configuration: " << e.what() << '\n';
        return kExitInvalidConfig;
    } catch (const magbill::InvalidGeometry& e) {
        std::cerr << "invalid geometry: " << e.what() << '\n';
        return kExitInvalidConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return 0;
}
