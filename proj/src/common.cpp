#include "arviz/common.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>

#include "arviz/rng.hpp"

namespace arviz {

std::string to_string(Cell c) { return "(" + std::to_string(c.col) + "," + std::to_string(c.row) + ")"; }

bool in_field_of_view(const Pose& viewer, Point target, double fovHalfAngle) {
    const double dx = target.x - viewer.x;
    const double dy = target.y - viewer.y;
    if (std::abs(dx) < 1e-9 && std::abs(dy) < 1e-9) return true;
    const double offset = std::abs(wrap_angle(std::atan2(dy, dx) - viewer.heading));
    return offset <= fovHalfAngle + 1e-12;
}

NoPathError::NoPathError(Cell s, Cell g)
    : std::runtime_error("no path from " + to_string(s) + " to " + to_string(g)), start(s), goal(g) {}

FormatError::FormatError(const std::string& what, std::size_t l)
    : std::runtime_error(l ? "line " + std::to_string(l) + ": " + what : what), line(l) {}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

double quantize6(double v) {
    const double q = std::round(v * 1e6) / 1e6;
    return q == 0.0 ? 0.0 : q;
}

std::string format6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", quantize6(v));
    return buf;
}

std::uint64_t Rng::uniform_index(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("uniform_index: empty range");
    // Largest multiple of n representable; values at or above it are redrawn.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x = 0;
    do {
        x = next();
    } while (x >= limit);
    return x % n;
}

std::ostream& operator<<(std::ostream& os, const Rng& r) { return os << r.engine_; }
std::istream& operator>>(std::istream& is, Rng& r) { return is >> r.engine_; }

}  // namespace arviz
