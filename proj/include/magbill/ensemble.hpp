#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "magbill/boundary.hpp"
#include "magbill/stepper.hpp"

namespace magbill {

/// Identifies the random stream construction in output metadata.
inline constexpr std::string_view kRngIdentifier = "mt19937_64+splitmix64-seed-mix/v1";

struct EnsembleConfig {
    BoundaryCurve curve{10.0, 10.0, 2.0};
    FieldParams field;
    std::size_t number_of_orbits = 1;
    std::size_t points_per_orbit = 1;
    double cutoff_delta = 0.01;
    double tolerance = kDefaultTolerance;
    std::uint64_t master_seed = 0;
    std::size_t highlight_count = 6;
    /// Worker threads for run_ensemble; 0 picks hardware concurrency.
    unsigned threads = 0;

    /// Throws InvalidConfig when an invariant is violated.
    void validate() const;
};

enum OrbitFlag : unsigned {
    kFullLoop = 1u << 0,
    kTerminatedEarly = 1u << 1,
};

struct OrbitRecord {
    std::size_t orbit_id = 0;
    std::uint64_t orbit_seed = 0;
    std::vector<PhasePoint> points;  ///< points[0] is the initial condition
    std::vector<Vec2> positions;     ///< positions[i] = point_at_polar(points[i].theta_pos)
    unsigned flags = 0;
    double max_residual = 0.0;       ///< largest |F| at a computed crossing

    bool has(OrbitFlag f) const { return (flags & f) != 0; }
};

/// SplitMix64 finalizer.
std::uint64_t splitmix64(std::uint64_t x);

/// Seed of orbit `index` derived from the master seed.
std::uint64_t mix_seed(std::uint64_t master_seed, std::uint64_t index);

/// Per-orbit random stream.
class OrbitRng {
public:
    explicit OrbitRng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on the open interval (0, 1), 53 random bits.
    double next_open_unit() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }

private:
    std::mt19937_64 engine_;
};

/// theta_pos uniform on (0, 2*pi), theta_vel uniform on (-pi/2 + delta, pi/2 - delta).
PhasePoint sample_initial(OrbitRng& rng, double cutoff_delta);

OrbitRecord run_orbit(const EnsembleConfig& config, const PhasePoint& init, std::size_t orbit_id);

/// Runs all orbits, in parallel when allowed. Output is independent of the
/// thread count.
std::vector<OrbitRecord> run_ensemble(const EnsembleConfig& config);

}  // namespace magbill
