#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <set>
#include <string>

#include "magbill/errors.hpp"
#include "magbill/output.hpp"

namespace magbill {
namespace {

constexpr const char* kBackgroundGray = "#a6a6a6";
constexpr int kBoundarySegments = 2048;

void append_fixed(std::string& out, double value) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed, 2);
    out.append(buf, res.ptr);
}

void save(const std::string& svg, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out.write(svg.data(), static_cast<std::streamsize>(svg.size()));
    out.close();
    if (!out) throw IoError("write failed for " + path.string());
}

void open_svg(std::string& svg, int width, int height) {
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + std::to_string(width) +
           "\" height=\"" + std::to_string(height) + "\" viewBox=\"0 0 " + std::to_string(width) + " " +
           std::to_string(height) + "\">\n";
    svg += "<rect x=\"0\" y=\"0\" width=\"" + std::to_string(width) + "\" height=\"" + std::to_string(height) +
           "\" fill=\"white\"/>\n";
}

// Dots are zero-length path segments with round caps: "M x yh0".
class DotPath {
public:
    DotPath(std::string& svg, const std::string& color, double size) : svg_(svg) {
        svg_ += "<path fill=\"none\" stroke=\"" + color + "\" stroke-linecap=\"round\" stroke-width=\"";
        append_fixed(svg_, size);
        svg_ += "\" d=\"";
    }
    DotPath(const DotPath&) = delete;
    DotPath& operator=(const DotPath&) = delete;
    ~DotPath() { svg_ += "\"/>\n"; }

    void add(double x, double y) {
        svg_ += 'M';
        append_fixed(svg_, x);
        svg_ += ' ';
        append_fixed(svg_, y);
        svg_ += "h0";
        ++count_;
    }
    std::size_t count() const { return count_; }

private:
    std::string& svg_;
    std::size_t count_ = 0;
};

std::string hsl_hex(double hue, double sat, double light) {
    const double c = (1.0 - std::fabs(2.0 * light - 1.0)) * sat;
    const double hp = hue / 60.0;
    const double x = c * (1.0 - std::fabs(std::fmod(hp, 2.0) - 1.0));
    double r = 0, g = 0, b = 0;
    if (hp < 1) r = c, g = x;
    else if (hp < 2) r = x, g = c;
    else if (hp < 3) g = c, b = x;
    else if (hp < 4) g = x, b = c;
    else if (hp < 5) r = x, b = c;
    else r = c, b = x;
    const double m = light - 0.5 * c;
    auto channel = [m](double v) { return static_cast<int>(std::lround(std::clamp(v + m, 0.0, 1.0) * 255.0)); };
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", channel(r), channel(g), channel(b));
    return buf;
}

bool is_highlighted(const PlotStyle& style, std::size_t id) {
    return std::find(style.highlighted_orbit_ids.begin(), style.highlighted_orbit_ids.end(), id) !=
           style.highlighted_orbit_ids.end();
}

const OrbitRecord* find_record(const std::vector<OrbitRecord>& records, std::size_t id) {
    if (id < records.size() && records[id].orbit_id == id) return &records[id];
    for (const OrbitRecord& r : records)
        if (r.orbit_id == id) return &r;
    return nullptr;
}

void text(std::string& svg, double x, double y, const std::string& anchor, const std::string& body,
          int size = 14) {
    svg += "<text x=\"";
    append_fixed(svg, x);
    svg += "\" y=\"";
    append_fixed(svg, y);
    svg += "\" font-family=\"serif\" font-size=\"" + std::to_string(size) + "\" text-anchor=\"" + anchor + "\">" +
           body + "</text>\n";
}

void line(std::string& svg, double x0, double y0, double x1, double y1) {
    svg += "<line x1=\"";
    append_fixed(svg, x0);
    svg += "\" y1=\"";
    append_fixed(svg, y0);
    svg += "\" x2=\"";
    append_fixed(svg, x1);
    svg += "\" y2=\"";
    append_fixed(svg, y1);
    svg += "\" stroke=\"black\" stroke-width=\"1\"/>\n";
}

}  // namespace

void PlotStyle::validate() const {
    std::set<std::size_t> seen(highlighted_orbit_ids.begin(), highlighted_orbit_ids.end());
    if (seen.size() != highlighted_orbit_ids.size()) throw InvalidConfig("highlighted orbit ids must be distinct");
    if (!(background_point_size > 0.0) || !(highlight_point_size > 0.0))
        throw InvalidConfig("point sizes must be positive");
    if (max_background_points == 0) throw InvalidConfig("background point budget must be positive");
}

const std::vector<std::string>& fixed_palette() {
    static const std::vector<std::string> palette{"#e69f00", "#56b4e9", "#009e73", "#0072b2", "#d55e00", "#cc79a7"};
    return palette;
}

std::string orbit_color(const PlotStyle& style, std::size_t orbit_id) {
    if (style.palette_mode == PaletteMode::RandomPerOrbit) {
        const std::uint64_t bits = splitmix64(style.color_seed ^ splitmix64(orbit_id + 0x0C010Bull));
        const double hue = static_cast<double>(bits >> 11) * 0x1.0p-53 * 360.0;
        return hsl_hex(hue, 0.75, 0.45);
    }
    const auto& ids = style.highlighted_orbit_ids;
    const auto it = std::find(ids.begin(), ids.end(), orbit_id);
    if (it == ids.end()) return kBackgroundGray;
    return fixed_palette()[static_cast<std::size_t>(it - ids.begin()) % fixed_palette().size()];
}

RenderInfo render_phase_portrait(const std::vector<OrbitRecord>& records, const PlotStyle& style,
                                 const std::filesystem::path& destination) {
    if (records.empty()) throw std::invalid_argument("render_phase_portrait needs at least one orbit");
    style.validate();

    constexpr int kWidth = 1000, kHeight = 560;
    constexpr double kLeft = 80, kTop = 30, kPlotW = 880, kPlotH = 440;
    const double pi = std::numbers::pi;
    auto px = [&](double theta_pos) { return kLeft + theta_pos / (2.0 * pi) * kPlotW; };
    auto py = [&](double theta_vel) { return kTop + (0.5 * pi - theta_vel) / pi * kPlotH; };
    auto drawable = [&](const PhasePoint& z) {
        return std::isfinite(z.theta_pos) && std::isfinite(z.theta_vel) && z.theta_pos >= 0.0 &&
               z.theta_pos <= 2.0 * pi && std::fabs(z.theta_vel) <= 0.5 * pi;
    };

    RenderInfo info;
    std::size_t background = 0;
    for (const OrbitRecord& r : records)
        if (!is_highlighted(style, r.orbit_id)) background += r.points.size();
    if (background > style.max_background_points)
        info.background_stride = (background + style.max_background_points - 1) / style.max_background_points;

    std::string svg;
    svg.reserve(64 + std::min<std::size_t>(background / info.background_stride, style.max_background_points) * 16);
    open_svg(svg, kWidth, kHeight);

    // Background orbits.
    if (style.palette_mode == PaletteMode::FixedSix) {
        DotPath dots(svg, kBackgroundGray, style.background_point_size);
        for (const OrbitRecord& r : records) {
            if (is_highlighted(style, r.orbit_id)) continue;
            for (std::size_t i = 0; i < r.points.size(); i += info.background_stride)
                if (drawable(r.points[i])) dots.add(px(r.points[i].theta_pos), py(r.points[i].theta_vel));
        }
        info.points_drawn += dots.count();
    } else {
        for (const OrbitRecord& r : records) {
            if (is_highlighted(style, r.orbit_id)) continue;
            DotPath dots(svg, orbit_color(style, r.orbit_id), style.background_point_size);
            for (std::size_t i = 0; i < r.points.size(); i += info.background_stride)
                if (drawable(r.points[i])) dots.add(px(r.points[i].theta_pos), py(r.points[i].theta_vel));
            info.points_drawn += dots.count();
        }
    }

    // Highlighted orbits on top, every point.
    for (std::size_t id : style.highlighted_orbit_ids) {
        const OrbitRecord* r = find_record(records, id);
        if (r == nullptr) continue;
        DotPath dots(svg, orbit_color(style, id), style.highlight_point_size);
        for (const PhasePoint& z : r->points)
            if (drawable(z)) dots.add(px(z.theta_pos), py(z.theta_vel));
        info.points_drawn += dots.count();
    }

    // Frame, ticks, labels.
    svg += "<rect x=\"80.00\" y=\"30.00\" width=\"880.00\" height=\"440.00\" fill=\"none\" stroke=\"black\"/>\n";
    const char* x_labels[] = {"0", "π/2", "π", "3π/2", "2π"};
    for (int k = 0; k <= 4; ++k) {
        const double x = px(0.5 * pi * k);
        line(svg, x, kTop + kPlotH, x, kTop + kPlotH + 6);
        text(svg, x, kTop + kPlotH + 24, "middle", x_labels[k]);
    }
    const char* y_labels[] = {"−π/2", "0", "π/2"};
    for (int k = 0; k <= 2; ++k) {
        const double y = py(-0.5 * pi + 0.5 * pi * k);
        line(svg, kLeft - 6, y, kLeft, y);
        text(svg, kLeft - 10, y + 5, "end", y_labels[k]);
    }
    text(svg, kLeft + 0.5 * kPlotW, kHeight - 20, "middle",
         "θ<tspan baseline-shift=\"sub\" font-size=\"11\">pos</tspan>", 16);
    text(svg, 24, kTop + 0.5 * kPlotH, "middle",
         "θ<tspan baseline-shift=\"sub\" font-size=\"11\">vel</tspan>", 16);
    svg += "</svg>\n";

    save(svg, destination);
    return info;
}

RenderInfo render_table_figure(const BoundaryCurve& curve, const std::vector<OrbitRecord>& records,
                               const PlotStyle& style, const std::filesystem::path& destination) {
    if (records.empty()) throw std::invalid_argument("render_table_figure needs at least one orbit");
    style.validate();

    constexpr int kSize = 720;
    constexpr double kMargin = 30;
    const double a = curve.semi_axis_a();
    const double b = curve.semi_axis_b();
    const double scale = std::min((kSize - 2 * kMargin) / (2 * a), (kSize - 2 * kMargin) / (2 * b));
    const double cx = 0.5 * kSize, cy = 0.5 * kSize;
    auto sx = [&](double x) { return cx + scale * x; };
    auto sy = [&](double y) { return cy - scale * y; };

    std::string svg;
    open_svg(svg, kSize, kSize);

    svg += "<polygon fill=\"none\" stroke=\"black\" stroke-width=\"1.5\" points=\"";
    for (int i = 0; i < kBoundarySegments; ++i) {
        const Vec2 q = curve.point_at_polar(kTwoPi * i / kBoundarySegments);
        if (i > 0) svg += ' ';
        append_fixed(svg, sx(q.x));
        svg += ',';
        append_fixed(svg, sy(q.y));
    }
    svg += "\"/>\n";

    RenderInfo info;
    for (std::size_t id : style.highlighted_orbit_ids) {
        const OrbitRecord* r = find_record(records, id);
        if (r == nullptr) continue;
        const std::size_t shown = std::min(style.points_on_table, r->positions.size());
        const std::string color = orbit_color(style, id);

        if (style.overlay_paths && shown > 1) {
            svg += "<path fill=\"none\" stroke=\"" + color + "\" stroke-width=\"0.5\" stroke-opacity=\"0.6\" d=\"M";
            append_fixed(svg, sx(r->positions[0].x));
            svg += ' ';
            append_fixed(svg, sy(r->positions[0].y));
            for (std::size_t i = 0; i + 1 < shown; ++i) {
                const Vec2 to = r->positions[i + 1];
                if (style.field.is_zero()) {
                    svg += 'L';
                } else {
                    const BoundaryState s = phase_to_state(curve, r->points[i]);
                    const double radius = style.field.larmor_radius();
                    const double sigma = style.field.orientation();
                    const Vec2 center = s.position + (sigma * radius) * perp(s.velocity);
                    const Vec2 u0 = s.position - center;
                    const Vec2 u1 = to - center;
                    const double swept = wrap_angle(sigma * std::atan2(cross(u0, u1), dot(u0, u1)));
                    svg += 'A';
                    append_fixed(svg, scale * radius);
                    svg += ' ';
                    append_fixed(svg, scale * radius);
                    svg += swept > std::numbers::pi ? " 0 1 " : " 0 0 ";
                    svg += sigma > 0 ? "0 " : "1 ";
                }
                append_fixed(svg, sx(to.x));
                svg += ' ';
                append_fixed(svg, sy(to.y));
            }
            svg += "\"/>\n";
        }

        DotPath dots(svg, color, style.highlight_point_size);
        for (std::size_t i = 0; i < shown; ++i) {
            const Vec2 q = r->positions[i];
            if (std::isfinite(q.x) && std::isfinite(q.y)) dots.add(sx(q.x), sy(q.y));
        }
        info.points_drawn += dots.count();
    }
    svg += "</svg>\n";

    save(svg, destination);
    return info;
}

}  // namespace magbill
