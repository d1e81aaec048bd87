#pragma once

// Static SVG 1.1 pictures of planar families. The y axis points up in the
// picture, matching the usual mathematical orientation.

#include "goodman/error.hpp"
#include "goodman/geometry.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <string>
#include <vector>

namespace goodman::svg {

struct Overlay {
    Homothet homothet;
    std::string css_class; // "cover", "inscribed", "minimal"
};

struct RenderOptions {
    bool show_body = true; // draw K itself (translation 0, scale 1)
    double width_px = 640;
};

namespace detail {

inline std::string num(double x) {
    if (std::abs(x) < 1e-12) x = 0;
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 10);
    return {buf, res.ptr};
}

struct Box {
    double x0 = std::numeric_limits<double>::infinity(), y0 = x0;
    double x1 = -std::numeric_limits<double>::infinity(), y1 = x1;

    void add(double x, double y) {
        x0 = std::min(x0, x);
        x1 = std::max(x1, x);
        y0 = std::min(y0, y);
        y1 = std::max(y1, y);
    }
};

inline void extend(Box& box, const ConvexBody& body, const Homothet& h) {
    if (body.is_ball()) {
        const Vector c = h.translation + h.scale * body.as_ball().center;
        const double r = h.scale * body.as_ball().radius;
        box.add(c(0) - r, c(1) - r);
        box.add(c(0) + r, c(1) + r);
        return;
    }
    for (const auto& v : member_vertices(h, body)) box.add(v(0), v(1));
}

inline std::string shape(const ConvexBody& body, const std::vector<Vector>& ordered, const Homothet& h,
                         const std::string& css) {
    if (body.is_ball()) {
        const Vector c = h.translation + h.scale * body.as_ball().center;
        return "  <circle class=\"" + css + "\" cx=\"" + num(c(0)) + "\" cy=\"" + num(-c(1)) + "\" r=\"" +
               num(h.scale * body.as_ball().radius) + "\"/>\n";
    }
    std::string pts;
    for (const auto& v : ordered) {
        const Vector p = h.translation + h.scale * v;
        if (!pts.empty()) pts += ' ';
        pts += num(p(0)) + "," + num(-p(1));
    }
    return "  <polygon class=\"" + css + "\" points=\"" + pts + "\"/>\n";
}

} // namespace detail

inline std::string render(const Family& family, const std::vector<Overlay>& overlays = {},
                          const RenderOptions& opts = {}) {
    if (family.dimension() != 2) fail(ErrorKind::UnsupportedDimension, "rendering needs a planar instance");
    const auto& body = family.body();
    const std::vector<Vector> ordered = body.is_polytope() ? order_polygon_2d(body.vertices()) : std::vector<Vector>{};
    const Homothet identity{Vector::Zero(2), 1.0};

    detail::Box box;
    for (const auto& m : family.members()) detail::extend(box, body, m);
    for (const auto& o : overlays) detail::extend(box, body, o.homothet);
    if (opts.show_body) detail::extend(box, body, identity);

    const double extent = std::max({box.x1 - box.x0, box.y1 - box.y0, 1e-9});
    const double pad = 0.05 * extent;
    const double vx = box.x0 - pad, vy = -box.y1 - pad;
    const double vw = box.x1 - box.x0 + 2 * pad, vh = box.y1 - box.y0 + 2 * pad;
    const double stroke = 0.004 * extent;

    std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + detail::num(opts.width_px) +
           "\" height=\"" + detail::num(opts.width_px * vh / vw) + "\" viewBox=\"" + detail::num(vx) + " " +
           detail::num(vy) + " " + detail::num(vw) + " " + detail::num(vh) + "\">\n";
    out += "  <style type=\"text/css\">\n"
           "    .body { fill: none; stroke: #444; stroke-dasharray: " + detail::num(4 * stroke) + "; }\n"
           "    .member { fill: #7fa7d9; fill-opacity: 0.45; stroke: #1f4e8c; }\n"
           "    .cover { fill: none; stroke: #c0392b; }\n"
           "    .minimal { fill: none; stroke: #8e44ad; stroke-dasharray: " + detail::num(2 * stroke) + "; }\n"
           "    .inscribed { fill: #f5b041; fill-opacity: 0.35; stroke: #b9770e; }\n"
           "  </style>\n";
    out += "  <g stroke-width=\"" + detail::num(stroke) + "\">\n";
    if (opts.show_body) out += "  " + detail::shape(body, ordered, identity, "body");
    for (const auto& m : family.members()) out += "  " + detail::shape(body, ordered, m, "member");
    for (const auto& o : overlays) out += "  " + detail::shape(body, ordered, o.homothet, o.css_class);
    out += "  </g>\n</svg>\n";
    return out;
}

} // namespace goodman::svg
