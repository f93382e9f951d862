#include "magbill/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "magbill/errors.hpp"

namespace magbill {

void EnsembleConfig::validate() const {
    if (number_of_orbits < 1) throw InvalidConfig("number of orbits must be at least 1");
    if (points_per_orbit < 1) throw InvalidConfig("points per orbit must be at least 1");
    if (!(cutoff_delta >= 0.0 && cutoff_delta < 0.5 * std::numbers::pi))
        throw InvalidConfig("cutoff delta must lie in [0, pi/2)");
    if (!(tolerance > 0.0)) throw InvalidConfig("tolerance must be positive");
    if (!std::isfinite(field.strength())) throw InvalidConfig("magnetic field must be finite");
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

std::uint64_t mix_seed(std::uint64_t master_seed, std::uint64_t index) {
    return splitmix64(master_seed ^ splitmix64(index));
}

PhasePoint sample_initial(OrbitRng& rng, double cutoff_delta) {
    const double half_width = 0.5 * std::numbers::pi - cutoff_delta;
    const double theta_pos = kTwoPi * rng.next_open_unit();
    const double theta_vel = -half_width + 2.0 * half_width * rng.next_open_unit();
    return {wrap_angle(theta_pos), theta_vel};
}

OrbitRecord run_orbit(const EnsembleConfig& config, const PhasePoint& init, std::size_t orbit_id) {
    OrbitRecord rec;
    rec.orbit_id = orbit_id;
    rec.points.reserve(config.points_per_orbit + 1);
    rec.positions.reserve(config.points_per_orbit + 1);
    rec.points.push_back(init);
    rec.positions.push_back(config.curve.point_at_polar(init.theta_pos));

    PhasePoint z = init;
    for (std::size_t k = 0; k < config.points_per_orbit; ++k) {
        StepResult step;
        try {
            step = billiard_step_detailed(config.curve, z, config.field, config.tolerance);
        } catch (const Error&) {
            rec.flags |= kTerminatedEarly;
            break;
        }
        if (step.full_loop) rec.flags |= kFullLoop;
        rec.max_residual = std::max(rec.max_residual, step.residual);
        z = step.next;
        rec.points.push_back(z);
        rec.positions.push_back(config.curve.point_at_polar(z.theta_pos));
    }
    return rec;
}

std::vector<OrbitRecord> run_ensemble(const EnsembleConfig& config) {
    config.validate();
    const std::size_t n = config.number_of_orbits;
    std::vector<OrbitRecord> records(n);

    auto compute = [&config, &records](std::size_t id) {
        const std::uint64_t seed = mix_seed(config.master_seed, id);
        OrbitRng rng(seed);
        const PhasePoint init = sample_initial(rng, config.cutoff_delta);
        records[id] = run_orbit(config, init, id);
        records[id].orbit_seed = seed;
    };

    unsigned threads = config.threads != 0 ? config.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
    if (threads <= 1) {
        for (std::size_t id = 0; id < n; ++id) compute(id);
        return records;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned w = 0; w < threads; ++w) {
            pool.emplace_back([&] {
                try {
                    for (std::size_t id = next.fetch_add(1); id < n; id = next.fetch_add(1)) compute(id);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                    next.store(n);
                }
            });
        }
    }
    if (failure) std::rethrow_exception(failure);
    return records;
}

}  // namespace magbill
