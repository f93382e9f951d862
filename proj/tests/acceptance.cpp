// Acceptance run at full size. Prints one PASS/FAIL line per criterion and
// exits nonzero if any fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "magbill/cli.hpp"
#include "magbill/verification.hpp"

using namespace magbill;
using namespace magbill::verification;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

bool same_bytes(const fs::path& a, const fs::path& b) {
    if (!fs::exists(a) || !fs::exists(b) || fs::file_size(a) != fs::file_size(b)) return false;
    std::ifstream fa(a, std::ios::binary), fb(b, std::ios::binary);
    std::vector<char> ba(1 << 20), bb(1 << 20);
    while (fa && fb) {
        fa.read(ba.data(), static_cast<std::streamsize>(ba.size()));
        fb.read(bb.data(), static_cast<std::streamsize>(bb.size()));
        if (fa.gcount() != fb.gcount()) return false;
        if (!std::equal(ba.begin(), ba.begin() + fa.gcount(), bb.begin())) return false;
    }
    return true;
}

struct Line {
    int number;
    std::string title;
    bool passed;
    std::string detail;
};

void print(const Line& l) {
    std::printf("[%s] criterion %2d  %s: %s\n", l.passed ? "PASS" : "FAIL", l.number, l.title.c_str(),
                l.detail.c_str());
    std::fflush(stdout);
}

Line from_check(int number, std::string title, const CheckResult& c, double seconds) {
    std::ostringstream detail;
    detail << format_check(c) << " [" << seconds << " s]";
    return {number, std::move(title), c.passed, detail.str()};
}

Line timed(int number, std::string title, const std::function<CheckResult()>& f) {
    const auto t0 = Clock::now();
    try {
        const CheckResult c = f();
        return from_check(number, std::move(title), c, seconds_since(t0));
    } catch (const std::exception& e) {
        return {number, std::move(title), false, std::string("exception: ") + e.what()};
    }
}

Line protocol_reproduction(const fs::path& scratch) {
    constexpr double kBudget = 300.0;
    std::ostringstream detail;
    bool ok = true;
    for (const auto& preset : cli::example_presets()) {
        cli::CliConfig base;
        std::ostringstream log;
        try {
            base.output_directory = scratch / "first";
            const auto t0 = Clock::now();
            const fs::path first = cli::run_example(preset.name, base, log);
            const double elapsed = seconds_since(t0);
            base.output_directory = scratch / "second";
            const fs::path second = cli::run_example(preset.name, base, log);

            bool files = true, identical = true;
            for (std::string_view f : {cli::kDataFile, cli::kMetadataFile, cli::kPortraitFile, cli::kTableFile}) {
                files = files && fs::exists(first / f) && fs::file_size(first / f) > 0;
                identical = identical && same_bytes(first / f, second / f);
            }
            const bool pass = files && identical && elapsed <= kBudget;
            ok = ok && pass;
            detail << preset.name << ": " << elapsed << " s" << (files ? "" : " missing-output")
                   << (identical ? " identical" : " DIFFERS") << "; ";
            std::fprintf(stderr, "  example %s: %.1f s, outputs %s, rerun %s\n", preset.name.c_str(), elapsed,
                         files ? "present" : "missing", identical ? "byte-identical" : "differs");
        } catch (const std::exception& e) {
            ok = false;
            detail << preset.name << ": exception " << e.what() << "; ";
        }
        fs::remove_all(scratch / "first");
        fs::remove_all(scratch / "second");
    }
    detail << "budget " << kBudget << " s each";
    return {10, "example presets complete and reproduce", ok, detail.str()};
}

}  // namespace

int main(int argc, char** argv) {
    fs::path scratch = fs::temp_directory_path() / "magbill_acceptance";
    if (argc > 1) scratch = argv[1];
    fs::remove_all(scratch);
    fs::create_directories(scratch);

    const std::vector<double> all_fields{0.0, 0.01, 0.5, 1.0, 2.0};
    const std::vector<double> grid_fields{0.0, 0.5, 1.0, 2.0};
    const std::vector<double> powers{2.0, 2.005};
    const BoundaryCurve ellipse(10.0, 8.0, 2.0);
    const BoundaryCurve perturbed(10.0, 8.0, 2.005);

    std::vector<Line> lines;
    auto run = [&](Line l) {
        print(l);
        lines.push_back(std::move(l));
    };

    {
        // 2 tables x 5 fields x 100 orbits x 1000 steps = 10^6 steps
        const auto t0 = Clock::now();
        Line l = timed(1, "boundary residual <= 1e-9 over 1e6 steps", [&] {
            return boundary_residual({ellipse, perturbed}, all_fields, 100, 1000, kDefaultTolerance, 1001);
        });
        const double elapsed = seconds_since(t0);
        if (elapsed > 120.0) {
            l.passed = false;
            l.detail += " exceeds the 120 s budget";
        }
        run(std::move(l));
    }
    run(timed(2, "circle theta_vel range <= 1e-8 over 1e4 steps",
              [&] { return circle_integrability(all_fields, 20, 10000, 2002); }));
    run(timed(3, "circle chord advance pi - 2 theta_vel", [&] { return circle_chord_advance(1000, 3003); }));
    run(timed(4, "magnetic circle oracle agreement",
              [&] { return circle_oracle_agreement({0.1, 0.5, 1.0, 2.0}, 1000, 4004); }));
    run(timed(5, "ellipse Joachimsthal spread <= 1e-7", [&] { return ellipse_joachimsthal(100, 1000, 5005); }));
    run(timed(6, "symplectic defect <= 1e-4", [&] { return symplecticity(grid_fields, powers, 100, 1e-5, 6006); }));
    run(timed(7, "reversibility over 100 steps <= 1e-6",
              [&] { return reversibility(grid_fields, powers, 100, 100, 7007); }));
    run(timed(8, "straight-line limit at B = 1e-6", [&] { return straight_line_limit(100, 8008); }));
    run(timed(9, "perturbed table breaks the Joachimsthal invariant",
              [&] { return perturbation_sensitivity(100, 1000, 9009); }));
    run(protocol_reproduction(scratch));

    fs::remove_all(scratch);

    std::size_t failed = 0;
    for (const Line& l : lines) failed += l.passed ? 0 : 1;
    std::printf("%zu of %zu criteria passed\n", lines.size() - failed, lines.size());
    return failed == 0 ? 0 : 1;
}
