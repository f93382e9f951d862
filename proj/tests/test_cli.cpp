#include "doctest.h"

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "magbill/cli.hpp"
#include "magbill/errors.hpp"
#include "magbill/verification.hpp"

using namespace magbill;
using namespace magbill::cli;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("magbill_test_cli_" + tag);
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_tool(const std::string& args) {
    const std::string cmd = std::string(MAGBILL_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

struct Expected {
    const char* name;
    double B, eps, p;
    std::size_t orbits, per_orbit, on_table;
    PaletteMode palette;
};

// Expected example parameters.
const Expected kTable[] = {
    {"0", 0.0, 1.5, 2.0, 1000, 1000, 1000, PaletteMode::FixedSix},
    {"1", 0.01, 1.5, 2.0, 1000, 1000, 2000, PaletteMode::FixedSix},
    {"2", 0.5, 1.5, 2.0, 1000, 1000, 500, PaletteMode::FixedSix},
    {"3", 1.0, 1.5, 2.0, 1000, 1000, 500, PaletteMode::FixedSix},
    {"4", 2.0, 1.5, 2.0, 1000, 1000, 500, PaletteMode::FixedSix},
    {"5", 0.0, 1.5, 2.005, 1000, 1000, 1000, PaletteMode::FixedSix},
    {"all", 1.0, 1.5, 2.0, 2000, 3000, 500, PaletteMode::RandomPerOrbit},
};

}  // namespace

TEST_CASE("geometry resolution") {
    CliConfig c;
    c.eccentricity_epsilon = 0.0;
    ResolvedGeometry g = resolve_geometry(c);
    CHECK(g.curve.is_circle());
    CHECK(g.curve.semi_axis_a() == 10.0);
    CHECK(g.curve.semi_axis_b() == 10.0);

    c = CliConfig{};
    c.semi_axis_b = 8.0;
    c.power_p = 2.5;
    g = resolve_geometry(c);
    CHECK(g.curve.semi_axis_a() == 10.0);
    CHECK(g.curve.semi_axis_b() == 8.0);
    CHECK(g.curve.power_p() == 2.5);
    CHECK(g.warnings.empty());

    c = CliConfig{};
    c.eccentricity_epsilon = 1.5;
    g = resolve_geometry(c);
    CHECK(g.curve.semi_axis_b() == doctest::Approx(11.18034).epsilon(1e-6));
    CHECK(g.curve.semi_axis_b() == doctest::Approx(10 * std::sqrt(1.25)));
    REQUIRE(g.warnings.size() == 1);
    CHECK(g.warnings[0].find("bounds no domain") != std::string::npos);

    c.power_p = 2.005;
    CHECK(resolve_geometry(c).curve.semi_axis_b() == doctest::Approx(10 * std::pow(1.25, 1 / 2.005)));

    c.semi_axis_b = 7.0;
    g = resolve_geometry(c);
    CHECK(g.curve.semi_axis_b() == 7.0);
    CHECK(g.warnings.size() == 1);

    c = CliConfig{};
    c.eccentricity_epsilon = 1.0;
    CHECK_THROWS_AS(resolve_geometry(c), InvalidGeometry);
    CHECK_THROWS_AS(resolve_geometry(CliConfig{}), InvalidConfig);
}

TEST_CASE("configuration validation") {
    CliConfig c;
    c.semi_axis_b = 8.0;
    CHECK_NOTHROW(c.validate());
    c.tolerance = 1e-3;
    CHECK_NOTHROW(c.validate());
    c.tolerance = 2e-3;
    CHECK_THROWS_AS(c.validate(), InvalidConfig);
    c.tolerance = 0.0;
    CHECK_THROWS_AS(c.validate(), InvalidConfig);
    c = CliConfig{};
    CHECK_THROWS_AS(c.validate(), InvalidConfig);
    c.subcommand = Subcommand::Verify;
    CHECK_NOTHROW(c.validate());
}

TEST_CASE("example presets") {
    REQUIRE(example_presets().size() == std::size(kTable));
    for (const Expected& e : kTable) {
        CAPTURE(e.name);
        const ExamplePreset& p = find_preset(e.name);
        CHECK(p.name == e.name);
        CHECK(p.field_B == e.B);
        CHECK(p.eccentricity == e.eps);
        CHECK(p.power_p == e.p);
        CHECK(p.number_of_orbits == e.orbits);
        CHECK(p.points_per_orbit == e.per_orbit);
        CHECK(p.points_on_table == e.on_table);
        CHECK(p.palette_mode == e.palette);
    }
    CHECK_THROWS_AS(find_preset("6"), InvalidConfig);

    CliConfig base;
    base.master_seed = 77;
    base.tolerance = 1e-10;
    base.semi_axis_b = 3.0;
    const CliConfig applied = apply_preset(find_preset("5"), base);
    CHECK(applied.power_p == 2.005);
    CHECK(applied.field_B == 0.0);
    CHECK(applied.master_seed == 77);
    CHECK(applied.tolerance == 1e-10);
    CHECK_FALSE(applied.semi_axis_b.has_value());
    CHECK(applied.eccentricity_epsilon == 1.5);

    const EnsembleConfig ens = make_ensemble_config(applied, resolve_geometry(applied).curve);
    CHECK(ens.number_of_orbits == 1000);
    CHECK(ens.points_per_orbit == 1000);
    CHECK(ens.master_seed == 77);
    CHECK(ens.field.is_zero());
}

TEST_CASE("simulate and plot") {
    TempDir tmp("run");
    CliConfig c;
    c.field_B = 0.5;
    c.eccentricity_epsilon = 1.5;
    c.number_of_orbits = 30;
    c.points_per_orbit = 80;
    c.points_on_table = 40;
    std::ostringstream log;
    for (const char* run : {"a", "b"}) {
        c.output_directory = tmp.path / run;
        simulate(c, log);
        plot(c, c.output_directory, log);
    }
    CHECK(log.str().find("warning") != std::string::npos);
    for (std::string_view file : {kDataFile, kMetadataFile, kPortraitFile, kTableFile}) {
        CAPTURE(file);
        REQUIRE(fs::exists(tmp.path / "a" / file));
        CHECK(slurp(tmp.path / "a" / file) == slurp(tmp.path / "b" / file));
    }
    const std::string meta = slurp(tmp.path / "a" / kMetadataFile);
    CHECK(meta.find("eccentricity=1.5") != std::string::npos);
    CHECK_THROWS_AS(plot(c, tmp.path / "missing", log), IoError);
}

TEST_CASE("verification report") {
    std::ostringstream log;
    CliConfig c;
    c.subcommand = Subcommand::Verify;
    SUBCASE("default run passes") {
        const auto report = verification::run_verification(c, log);
        CHECK(report.passed());
        bool saw_symplectic = false;
        for (const auto& check : report.checks) {
            CAPTURE(check.name);
            CHECK(check.passed);
            if (check.name.find("symplectic") != std::string::npos) {
                saw_symplectic = true;
                CHECK(check.measured <= 1e-4);
            }
        }
        CHECK(saw_symplectic);
    }
    SUBCASE("loose tolerance is reported") {
        c.tolerance = 1e-3;
        c.semi_axis_b = 8.0;
        const auto report = verification::run_verification(c, log);
        CHECK(report.checks.front().name.find("configured geometry") != std::string::npos);
        CHECK(report.checks.front().bound == 1e-3);
        CHECK(report.checks.front().passed);
    }
    SUBCASE("magnetic circle includes the oracle check") {
        c.field_B = 1.0;
        c.eccentricity_epsilon = 0.0;
        const auto report = verification::run_verification(c, log);
        bool found = false;
        for (const auto& check : report.checks)
            if (check.name == "configured circle oracle agreement") {
                found = true;
                CHECK(check.passed);
            }
        CHECK(found);
        CHECK(report.passed());
    }
}

TEST_CASE("command-line exit codes") {
    TempDir tmp("exit");
    const std::string out = (tmp.path / "run").string();
    CHECK(run_tool("--help") == 0);
    CHECK(run_tool("simulate --orbits 3 --points-per-orbit 5 --out " + out) == 2);
    CHECK(run_tool("simulate --eccentricity 1 --out " + out) == 2);
    CHECK(run_tool("simulate --semi-axis-b 8 --tol 0.5 --out " + out) == 2);
    CHECK(run_tool("simulate --no-such-flag") == 2);
    CHECK(run_tool("example 9 --out " + out) == 2);
    CHECK(run_tool("plot --in " + (tmp.path / "nothing").string()) == 3);
    CHECK(run_tool("simulate -B 1 --semi-axis-b 8 --orbits 4 --points-per-orbit 20 --out " + out) == 0);
    CHECK(run_tool("plot --in " + out + " --points-on-table 10") == 0);
    CHECK(fs::exists(tmp.path / "run" / kTableFile));
    CHECK(run_tool("verify") == 0);
}
