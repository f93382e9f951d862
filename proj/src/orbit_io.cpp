#include <charconv>
#include <cmath>
#include <fstream>
#include <string>
#include <system_error>

#include "magbill/errors.hpp"
#include "magbill/kernels.hpp"
#include "magbill/output.hpp"
#include "magbill/version.hpp"

namespace magbill {
namespace {

void append_double(std::string& out, double value) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
    out.append(buf, res.ptr);
}

template <class Int>
void append_int(std::string& out, Int value) {
    char buf[24];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    out.append(buf, res.ptr);
}

std::ofstream open_for_write(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    return out;
}

void flush_chunk(std::ofstream& out, std::string& chunk, const std::filesystem::path& path) {
    out.write(chunk.data(), static_cast<std::streamsize>(chunk.size()));
    if (!out) throw IoError("write failed for " + path.string());
    chunk.clear();
}

template <class T>
T parse_field(std::string_view text, const std::filesystem::path& path, std::size_t line_no) {
    T value{};
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
        throw IoError(path.string() + ":" + std::to_string(line_no) + ": malformed field '" + std::string(text) + "'");
    return value;
}

}  // namespace

std::string format_double(double value) {
    std::string s;
    append_double(s, value);
    return s;
}

void write_orbit_data(const std::vector<OrbitRecord>& records, const std::filesystem::path& destination) {
    if (records.empty()) throw std::invalid_argument("write_orbit_data needs at least one orbit");
    std::ofstream out = open_for_write(destination);
    std::string chunk;
    chunk.reserve(1 << 20);
    chunk.append(kOrbitCsvHeader);
    chunk.push_back('\n');
    for (const OrbitRecord& rec : records) {
        for (std::size_t i = 0; i < rec.points.size(); ++i) {
            append_int(chunk, rec.orbit_id);
            chunk.push_back(',');
            append_int(chunk, i);
            chunk.push_back(',');
            append_double(chunk, rec.points[i].theta_pos);
            chunk.push_back(',');
            append_double(chunk, rec.points[i].theta_vel);
            chunk.push_back(',');
            append_double(chunk, rec.positions[i].x);
            chunk.push_back(',');
            append_double(chunk, rec.positions[i].y);
            chunk.push_back('\n');
            if (chunk.size() > (1u << 20) - 256) flush_chunk(out, chunk, destination);
        }
    }
    flush_chunk(out, chunk, destination);
    out.close();
    if (!out) throw IoError("closing " + destination.string() + " failed");
}

std::vector<OrbitRecord> read_orbit_data(const std::filesystem::path& source) {
    std::ifstream in(source, std::ios::binary);
    if (!in) throw IoError("cannot open " + source.string());
    std::string line;
    if (!std::getline(in, line) || line != kOrbitCsvHeader)
        throw IoError(source.string() + ": missing or unexpected header");

    std::vector<OrbitRecord> records;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::string_view fields[6];
        std::size_t start = 0;
        for (int k = 0; k < 6; ++k) {
            const std::size_t comma = k < 5 ? line.find(',', start) : line.size();
            if (comma == std::string::npos)
                throw IoError(source.string() + ":" + std::to_string(line_no) + ": expected 6 fields");
            fields[k] = std::string_view(line).substr(start, comma - start);
            start = comma + 1;
        }
        const auto id = parse_field<std::size_t>(fields[0], source, line_no);
        const auto step = parse_field<std::size_t>(fields[1], source, line_no);
        if (records.empty() || records.back().orbit_id != id) {
            records.emplace_back();
            records.back().orbit_id = id;
        }
        OrbitRecord& rec = records.back();
        if (step != rec.points.size())
            throw IoError(source.string() + ":" + std::to_string(line_no) + ": step index out of sequence");
        rec.points.push_back({parse_field<double>(fields[2], source, line_no),
                              parse_field<double>(fields[3], source, line_no)});
        rec.positions.push_back({parse_field<double>(fields[4], source, line_no),
                                 parse_field<double>(fields[5], source, line_no)});
    }
    if (records.empty()) throw IoError(source.string() + ": no orbit rows");
    return records;
}

void write_metadata(const Metadata& entries, const std::filesystem::path& destination) {
    std::ofstream out = open_for_write(destination);
    std::string text;
    for (const auto& [key, value] : entries) {
        text += key;
        text += '=';
        text += value;
        text += '\n';
    }
    flush_chunk(out, text, destination);
}

Metadata read_metadata(const std::filesystem::path& source) {
    std::ifstream in(source);
    if (!in) throw IoError("cannot open " + source.string());
    Metadata entries;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line.front() == '#') continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) throw IoError(source.string() + ": line without '=': " + line);
        entries.emplace_back(line.substr(0, eq), line.substr(eq + 1));
    }
    return entries;
}

std::optional<std::string> metadata_value(const Metadata& entries, const std::string& key) {
    for (const auto& [k, v] : entries)
        if (k == key) return v;
    return std::nullopt;
}

Metadata describe_ensemble(const EnsembleConfig& config, const std::vector<OrbitRecord>& records) {
    std::size_t early = 0;
    std::size_t loops = 0;
    std::size_t points = 0;
    double residual = 0.0;
    for (const OrbitRecord& r : records) {
        early += r.has(kTerminatedEarly) ? 1 : 0;
        loops += r.has(kFullLoop) ? 1 : 0;
        points += r.points.size();
        residual = std::max(residual, r.max_residual);
    }
    const double larmor = config.field.larmor_radius();
    return {
        {"tool", "magbill"},
        {"tool_version", std::string(kVersion)},
        {"rng", std::string(kRngIdentifier)},
        {"master_seed", std::to_string(config.master_seed)},
        {"semi_axis_a", format_double(config.curve.semi_axis_a())},
        {"semi_axis_b", format_double(config.curve.semi_axis_b())},
        {"power_p", format_double(config.curve.power_p())},
        {"magnetic_field", format_double(config.field.strength())},
        {"larmor_radius", std::isfinite(larmor) ? format_double(larmor) : std::string("inf")},
        {"number_of_orbits", std::to_string(config.number_of_orbits)},
        {"points_per_orbit", std::to_string(config.points_per_orbit)},
        {"cutoff_delta", format_double(config.cutoff_delta)},
        {"tolerance", format_double(config.tolerance)},
        {"highlight_count", std::to_string(config.highlight_count)},
        {"recorded_points", std::to_string(points)},
        {"orbits_terminated_early", std::to_string(early)},
        {"orbits_with_full_loop", std::to_string(loops)},
        {"max_boundary_residual", format_double(residual)},
    };
}

}  // namespace magbill
