#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "adhesion/grid.hpp"

namespace adhesion {

// Minimal SVG canvas in world coordinates (y up).
class Svg {
public:
    Svg(Vec2 lo, Vec2 hi, int width_px = 480);

    void line(Vec2 a, Vec2 b, const std::string& stroke, double width = 1.0, const std::string& dash = "");
    void arrow(Vec2 a, Vec2 b, const std::string& stroke, double width = 1.0);
    void polygon(const std::vector<Vec2>& pts, const std::string& fill, const std::string& stroke = "none",
                 double opacity = 1.0);
    void circle(Vec2 c, double r_px, const std::string& fill);
    void text(Vec2 p, const std::string& s, int size_px = 12, const std::string& fill = "#000");
    // clip the ray a + s d (s >= 0) to the view box
    void ray(Vec2 a, Vec2 d, const std::string& stroke, double width = 1.0, const std::string& dash = "");

    Vec2 lo() const { return lo_; }
    Vec2 hi() const { return hi_; }
    std::string str() const;

private:
    double px(double x) const;
    double py(double y) const;

    Vec2 lo_, hi_;
    int w_, h_;
    std::ostringstream body_;
};

// parameter range [s0, s1] of the part of a + s d inside the box, false when it misses
bool clip_line(Vec2 a, Vec2 d, Vec2 lo, Vec2 hi, double& s0, double& s1);

}  // namespace adhesion
