#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>

namespace arviz {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kSqrt2 = std::numbers::sqrt2;

struct Point {
    double x = 0.0;
    double y = 0.0;

    bool operator==(const Point&) const = default;
};

inline double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

/// Wraps an angle into [-pi, pi).
inline double wrap_angle(double a) {
    double w = std::fmod(a + kPi, 2.0 * kPi);
    if (w < 0.0) w += 2.0 * kPi;
    return w - kPi;
}

struct Pose {
    double x = 0.0;
    double y = 0.0;
    double heading = 0.0;  // radians, [-pi, pi)

    Point position() const { return {x, y}; }
    bool operator==(const Pose&) const = default;
};

/// Grid cell. Ordering is lexicographic by (row, col), which the planner
/// uses as its deterministic tie-break.
struct Cell {
    int col = 0;
    int row = 0;

    bool operator==(const Cell&) const = default;
    std::strong_ordering operator<=>(const Cell& o) const {
        if (auto c = row <=> o.row; c != 0) return c;
        return col <=> o.col;
    }
};

std::string to_string(Cell c);

/// True if `target` lies inside the viewing cone of `viewer` (points at the
/// viewer's own position count as visible).
bool in_field_of_view(const Pose& viewer, Point target, double fovHalfAngle);

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class LookupError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NoPathError : public std::runtime_error {
public:
    NoPathError(Cell start, Cell goal);
    Cell start;
    Cell goal;
};

class PoolExhausted : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class TrainingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or incompatible on-disk artifact. `line` is 1-based, 0 if the
/// problem is not tied to a line.
class FormatError : public std::runtime_error {
public:
    FormatError(const std::string& what, std::size_t line = 0);
    std::size_t line;
};

class ExpertTimeout : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// 64-bit FNV-1a, used for content fingerprints.
std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t v);

/// Rounds to the 6-decimal grid used on disk.
double quantize6(double v);
/// Fixed 6-decimal text, with -0 printed as 0.
std::string format6(double v);

}  // namespace arviz
