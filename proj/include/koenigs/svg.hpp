#pragma once

// Static SVG renders: disc phase portrait with orbits and the Denjoy-Wolff
// marker, the image domain h(D) with translation arrows, and the sign of
// Re p over the disc.  Output is plain text with fixed formatting, so a
// fixed config renders byte-identically.

#include <cstdio>
#include <string>
#include <vector>

#include "koenigs/report.hpp"

namespace koenigs {

namespace detail {

inline std::string svg_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

inline std::string svg_open(double x0, double y0, double w, double h) {
    // y axis flipped inside a group so the viewBox is in math coordinates
    std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"640\" "
                    "viewBox=\"" +
                    svg_num(x0) + " " + svg_num(-y0 - h) + " " + svg_num(w) + " " + svg_num(h) +
                    "\">\n";
    s += "<g transform=\"scale(1,-1)\">\n";
    return s;
}

inline const char* svg_close() { return "</g>\n</svg>\n"; }

} // namespace detail

/// Disc phase portrait: unit circle, orbit polylines from the given starts,
/// and a marker at the Denjoy-Wolff estimate.
inline std::string render_phase_portrait(const RunConfig& cfg,
                                         const std::vector<Complex>& starts) {
    using detail::svg_num;
    std::string s = detail::svg_open(-1.15, -1.15, 2.3, 2.3);
    s += "<circle cx=\"0\" cy=\"0\" r=\"1\" fill=\"none\" stroke=\"#444444\" "
         "stroke-width=\"0.008\"/>\n";
    s += "<line x1=\"-1.1\" y1=\"0\" x2=\"1.1\" y2=\"0\" stroke=\"#cccccc\" "
         "stroke-width=\"0.004\"/>\n";
    s += "<line x1=\"0\" y1=\"-1.1\" x2=\"0\" y2=\"1.1\" stroke=\"#cccccc\" "
         "stroke-width=\"0.004\"/>\n";

    const double t_max = std::min(cfg.analysis.horizon, 20.0);
    for (const Complex& z0 : starts) {
        std::string pts;
        OrbitWalker walker(cfg.semigroup, z0);
        for (int i = 0; i <= 96; ++i) {
            const double t = t_max * i / 96.0;
            Complex z;
            try {
                z = walker.at(t);
            } catch (const error&) {
                break;
            }
            pts += svg_num(z.real()) + "," + svg_num(z.imag()) + " ";
        }
        if (!pts.empty())
            s += "<polyline class=\"orbit\" points=\"" + pts +
                 "\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"0.006\"/>\n";
    }

    try {
        const DenjoyWolff dw = denjoy_wolff(cfg.semigroup, cfg.analysis.horizon);
        s += "<circle class=\"dw\" cx=\"" + svg_num(dw.point.real()) + "\" cy=\"" +
             svg_num(dw.point.imag()) +
             "\" r=\"0.025\" fill=\"#d62728\" stroke=\"none\"/>\n";
    } catch (const error&) {
        // no marker when the orbit is not evaluable
    }
    s += detail::svg_close();
    return s;
}

/// Raster of the image domain h(D) (one dot per grid point) with three
/// arrows indicating the +it translation direction.  Only meaningful when
/// the configured semigroup carries a Koenigs function.
inline std::string render_image_domain(const RunConfig& cfg) {
    using detail::svg_num;
    std::optional<std::pair<HolomorphicMap, BoundaryPoint>> k;
    try {
        k = koenigs_of_config(cfg);
    } catch (const error&) {
        // not a Koenigs function: fall through to the empty panel
    }
    if (!k) {
        std::string s = detail::svg_open(-1.0, -1.0, 2.0, 2.0);
        s += detail::svg_close();
        return s;
    }
    const HolomorphicMap& h = k->first;
    const GridSpec grid(40, 80, 0.99);
    std::vector<Complex> vals;
    double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
    for (const Complex& z : grid.points()) {
        Complex v;
        try {
            v = h(z);
        } catch (const error&) {
            continue;
        }
        if (std::abs(v) > 40.0) continue; // clip far ends of unbounded images
        vals.push_back(v);
        x0 = std::min(x0, v.real());
        x1 = std::max(x1, v.real());
        y0 = std::min(y0, v.imag());
        y1 = std::max(y1, v.imag());
    }
    if (vals.empty()) {
        std::string s = detail::svg_open(-1.0, -1.0, 2.0, 2.0);
        s += detail::svg_close();
        return s;
    }
    const double pad = 0.05 * std::max(x1 - x0, y1 - y0) + 0.05;
    std::string s = detail::svg_open(x0 - pad, y0 - pad, (x1 - x0) + 2 * pad, (y1 - y0) + 2 * pad);
    const double dot = 0.004 * std::max(x1 - x0 + 2 * pad, y1 - y0 + 2 * pad);
    for (const Complex& v : vals)
        s += "<circle class=\"img\" cx=\"" + svg_num(v.real()) + "\" cy=\"" + svg_num(v.imag()) +
             "\" r=\"" + svg_num(dot) + "\" fill=\"#2ca02c\" fill-opacity=\"0.5\"/>\n";
    // translation arrows: the semigroup acts as w -> w + it on the image
    const double len = 0.2 * (y1 - y0 + 2 * pad);
    const double head = 0.25 * len;
    for (int j = 1; j <= 3; ++j) {
        const double ax = x0 + j * (x1 - x0) / 4.0;
        const double ay = y0 + 0.3 * (y1 - y0);
        s += "<line class=\"arrow\" x1=\"" + svg_num(ax) + "\" y1=\"" + svg_num(ay) + "\" x2=\"" +
             svg_num(ax) + "\" y2=\"" + svg_num(ay + len) +
             "\" stroke=\"#222222\" stroke-width=\"" + svg_num(0.1 * head) + "\"/>\n";
        s += "<path class=\"arrow\" d=\"M " + svg_num(ax - 0.4 * head) + " " +
             svg_num(ay + len - head) + " L " + svg_num(ax) + " " + svg_num(ay + len) + " L " +
             svg_num(ax + 0.4 * head) + " " + svg_num(ay + len - head) + " Z\" fill=\"#222222\"/>\n";
    }
    s += detail::svg_close();
    return s;
}

/// Sign map of Re p over the disc: blue where positive, red where negative
/// beyond roundoff, gray on the |Re p| <= 1e-9 band.
inline std::string render_re_p_map(const RunConfig& cfg) {
    using detail::svg_num;
    std::string s = detail::svg_open(-1.15, -1.15, 2.3, 2.3);
    s += "<circle cx=\"0\" cy=\"0\" r=\"1\" fill=\"none\" stroke=\"#444444\" "
         "stroke-width=\"0.008\"/>\n";
    std::optional<GeneratorData> gd;
    try {
        gd = generator_data_for(cfg);
    } catch (const error&) {
    }
    if (gd) {
        const GridSpec grid(28, 72, 0.97);
        for (const Complex& z : grid.points()) {
            double re;
            try {
                re = gd->p(z).real();
            } catch (const error&) {
                continue;
            }
            const char* color = re > 1e-9 ? "#1f77b4" : (re < -1e-9 ? "#d62728" : "#aaaaaa");
            s += "<circle class=\"rep\" cx=\"" + svg_num(z.real()) + "\" cy=\"" +
                 svg_num(z.imag()) + "\" r=\"0.018\" fill=\"" + color + "\"/>\n";
        }
    }
    s += detail::svg_close();
    return s;
}

/// Render all three panels into a directory; returns the file paths.
inline std::vector<std::string> render_all(const RunConfig& cfg, const std::string& out_dir) {
    std::vector<Complex> starts;
    if (cfg.raw.contains("render") && cfg.raw["render"].contains("orbit_starts")) {
        for (const auto& p : cfg.raw["render"]["orbit_starts"])
            starts.push_back(detail::parse_point(p, "render.orbit_starts entry"));
    } else {
        for (int kk = 0; kk < 8; ++kk)
            starts.push_back(std::polar(0.55, 2.0 * M_PI * kk / 8.0));
    }

    std::vector<std::pair<std::string, std::string>> files{
        {"phase_portrait.svg", render_phase_portrait(cfg, starts)},
        {"image_domain.svg", render_image_domain(cfg)},
        {"re_p_map.svg", render_re_p_map(cfg)},
    };
    std::vector<std::string> written;
    for (const auto& [name, content] : files) {
        const std::string path = out_dir + "/" + name;
        std::ofstream out(path, std::ios::binary);
        if (!out) throw domain_error("cannot write " + path);
        out << content;
        written.push_back(path);
    }
    return written;
}

} // namespace koenigs
