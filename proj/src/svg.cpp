#include "adhesion/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace adhesion {

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string dash_attr(const std::string& dash) { return dash.empty() ? "" : " stroke-dasharray=\"" + dash + "\""; }

}  // namespace

bool clip_line(Vec2 a, Vec2 d, Vec2 lo, Vec2 hi, double& s0, double& s1) {
    double p[4] = {-d.x, d.x, -d.y, d.y};
    double q[4] = {a.x - lo.x, hi.x - a.x, a.y - lo.y, hi.y - a.y};
    for (int k = 0; k < 4; ++k) {
        if (p[k] == 0.0) {
            if (q[k] < 0) return false;
            continue;
        }
        double r = q[k] / p[k];
        if (p[k] < 0)
            s0 = std::max(s0, r);
        else
            s1 = std::min(s1, r);
    }
    return s0 <= s1;
}

Svg::Svg(Vec2 lo, Vec2 hi, int width_px) : lo_(lo), hi_(hi), w_(width_px) {
    h_ = int(std::lround(width_px * (hi.y - lo.y) / (hi.x - lo.x)));
}

double Svg::px(double x) const { return (x - lo_.x) / (hi_.x - lo_.x) * w_; }
double Svg::py(double y) const { return (hi_.y - y) / (hi_.y - lo_.y) * h_; }

void Svg::line(Vec2 a, Vec2 b, const std::string& stroke, double width, const std::string& dash) {
    body_ << "<line x1=\"" << num(px(a.x)) << "\" y1=\"" << num(py(a.y)) << "\" x2=\"" << num(px(b.x)) << "\" y2=\""
          << num(py(b.y)) << "\" stroke=\"" << stroke << "\" stroke-width=\"" << num(width) << "\"" << dash_attr(dash)
          << "/>\n";
}

void Svg::arrow(Vec2 a, Vec2 b, const std::string& stroke, double width) {
    line(a, b, stroke, width);
    double dx = px(b.x) - px(a.x), dy = py(b.y) - py(a.y);
    double L = std::hypot(dx, dy);
    if (L < 1e-9) return;
    double ux = dx / L, uy = dy / L, hl = std::min(7.0, 0.4 * L);
    double bx = px(b.x), by = py(b.y);
    body_ << "<polygon points=\"" << num(bx) << "," << num(by) << " " << num(bx - hl * ux - 0.5 * hl * uy) << ","
          << num(by - hl * uy + 0.5 * hl * ux) << " " << num(bx - hl * ux + 0.5 * hl * uy) << ","
          << num(by - hl * uy - 0.5 * hl * ux) << "\" fill=\"" << stroke << "\"/>\n";
}

void Svg::polygon(const std::vector<Vec2>& pts, const std::string& fill, const std::string& stroke, double opacity) {
    body_ << "<polygon points=\"";
    for (std::size_t k = 0; k < pts.size(); ++k)
        body_ << (k ? " " : "") << num(px(pts[k].x)) << "," << num(py(pts[k].y));
    body_ << "\" fill=\"" << fill << "\" stroke=\"" << stroke << "\" fill-opacity=\"" << num(opacity) << "\"/>\n";
}

void Svg::circle(Vec2 c, double r_px, const std::string& fill) {
    body_ << "<circle cx=\"" << num(px(c.x)) << "\" cy=\"" << num(py(c.y)) << "\" r=\"" << num(r_px) << "\" fill=\""
          << fill << "\"/>\n";
}

void Svg::text(Vec2 p, const std::string& s, int size_px, const std::string& fill) {
    body_ << "<text x=\"" << num(px(p.x)) << "\" y=\"" << num(py(p.y)) << "\" font-size=\"" << size_px
          << "\" font-family=\"sans-serif\" fill=\"" << fill << "\">" << s << "</text>\n";
}

void Svg::ray(Vec2 a, Vec2 d, const std::string& stroke, double width, const std::string& dash) {
    double s0 = 0.0, s1 = std::numeric_limits<double>::infinity();
    if (!clip_line(a, d, lo_, hi_, s0, s1)) return;
    line(a + s0 * d, a + s1 * d, stroke, width, dash);
}

std::string Svg::str() const {
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w_ << "\" height=\"" << h_ << "\" viewBox=\"0 0 "
       << w_ << " " << h_ << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
       << body_.str() << "</svg>\n";
    return os.str();
}

}  // namespace adhesion
