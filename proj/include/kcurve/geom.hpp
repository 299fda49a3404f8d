#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "kcurve/errors.hpp"

namespace kcurve {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Absolute tolerance for joint continuity (lengths and radians).
inline constexpr double kEpsJoin = 1e-9;
// Angular tolerance for antiparallel-tangent detection.
inline constexpr double kEpsAngle = 1e-6;
// Absolute tolerance for region-boundary membership.
inline constexpr double kEpsRegion = 1e-9;
// Relative slack on the curvature bound.
inline constexpr double kEpsRel = 1e-6;
// Absolute tolerance for length comparisons.
inline constexpr double kTol = 1e-9;
// Components shorter than this are dropped at construction.
inline constexpr double kEpsDegenerate = 1e-12;

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }
inline Point2 operator*(Point2 p, double s) { return {s * p.x, s * p.y}; }
inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 p) { return std::hypot(p.x, p.y); }
inline double distance(Point2 a, Point2 b) { return norm(a - b); }
inline double angle_of(Point2 p) { return std::atan2(p.y, p.x); }
inline Point2 unit(double angle) { return {std::cos(angle), std::sin(angle)}; }
// Counterclockwise quarter-turn.
inline Point2 perp(Point2 p) { return {-p.y, p.x}; }

// Normalize an angle into (-pi, pi].
inline double normalize_angle(double a) {
    a = std::fmod(a + kPi, kTwoPi);
    if (a <= 0.0) a += kTwoPi;
    return a - kPi;
}

// Signed angular difference a - b, normalized into (-pi, pi].
inline double angle_diff(double a, double b) { return normalize_angle(a - b); }

// Reduce an angle into [0, 2*pi).
inline double mod_two_pi(double a) {
    a = std::fmod(a, kTwoPi);
    if (a < 0.0) a += kTwoPi;
    return a;
}

// Curvature bound kappa together with the turning radius r = 1/kappa.
struct KappaParams {
    double kappa = 1.0;
    double r = 1.0;

    KappaParams() = default;
    explicit KappaParams(double kappa_in) : kappa(kappa_in), r(1.0 / kappa_in) {
        if (!(kappa_in > 0.0) || !std::isfinite(kappa_in))
            throw DomainError("kappa must be a positive finite real");
    }
};

// A point together with a travel direction.
struct Config {
    Point2 position;
    double heading = 0.0;  // radians, normalized to (-pi, pi]

    Config() = default;
    Config(Point2 pos, double heading_in)
        : position(pos), heading(normalize_angle(heading_in)) {}
};

// Circular arc of fixed radius. Positive sweep is counterclockwise. The
// endpoints are derived from (center, radius, start_angle, sweep) so that
// long arcs accumulate no endpoint drift.
struct ArcComponent {
    Point2 center;
    double radius = 1.0;
    double start_angle = 0.0;  // radians, polar angle of the start point
    double sweep = 0.0;        // signed radians

    double length() const { return radius * std::fabs(sweep); }
    double angle_at(double s) const {
        return start_angle + std::copysign(s / radius, sweep);
    }
    Point2 point_at(double s) const {
        return center + radius * unit(angle_at(s));
    }
    double heading_at(double s) const {
        return normalize_angle(angle_at(s) + std::copysign(kPi / 2.0, sweep));
    }
    Point2 start_point() const { return point_at(0.0); }
    Point2 end_point() const { return point_at(length()); }
};

struct SegmentComponent {
    Point2 start;
    Point2 end;

    double length() const { return distance(start, end); }
    double heading() const { return angle_of(end - start); }
    Point2 point_at(double s) const {
        const double len = length();
        return start + (s / len) * (end - start);
    }
};

using Component = std::variant<ArcComponent, SegmentComponent>;

double component_length(const Component& c);
Point2 component_point_at(const Component& c, double s);
double component_heading_at(const Component& c, double s);
Config component_start(const Component& c);
Config component_end(const Component& c);
Component reverse_component(const Component& c);

// Exact minimum and maximum distance from a fixed point to the image of a
// component.
std::pair<double, double> distance_range_to_point(const Component& c, Point2 p);

// Piecewise curve made of fixed-radius arcs and line segments. Construction
// drops degenerate components and computes cumulative lengths; structural
// validity (joint continuity, radius bound) is checked by validate_cs, not
// here, so that invalid candidates can be represented and reported.
class CsCurve {
  public:
    CsCurve(KappaParams kappa, std::vector<Component> components);

    const KappaParams& kappa() const { return kappa_; }
    const std::vector<Component>& components() const { return components_; }
    const std::vector<double>& cumulative_lengths() const { return cum_; }
    std::size_t complexity() const { return components_.size(); }

    double total_length() const { return cum_.back(); }
    Point2 evaluate(double s) const;
    double tangent(double s) const;
    Config config_at(double s) const;
    Config start_config() const { return component_start(components_.front()); }
    Config end_config() const { return component_end(components_.back()); }
    Point2 start_point() const { return start_config().position; }
    Point2 end_point() const { return end_config().position; }
    bool is_closed() const {
        return distance(start_point(), end_point()) <= 1e-12;
    }

    // Component index and local arc length for a global arc length.
    std::pair<std::size_t, double> locate(double s) const;

  private:
    KappaParams kappa_;
    std::vector<Component> components_;
    std::vector<double> cum_;  // size complexity()+1, cum_[0] = 0
};

// Polyline stand-in for a general curvature-bounded curve: ordered points
// with their arc-length positions along the underlying curve.
struct SampledCurve {
    KappaParams kappa;
    std::vector<Point2> points;
    std::vector<double> cumulative_lengths;

    SampledCurve(KappaParams kappa_in, std::vector<Point2> pts,
                 std::vector<double> cum);

    double total_length() const { return cumulative_lengths.back(); }
    Point2 evaluate(double s) const;
    double tangent(double s) const;
    // Tangent estimate at a vertex: mean direction of the adjacent chords.
    double vertex_tangent(std::size_t i) const;
    Config config_at(double s) const { return {evaluate(s), tangent(s)}; }
    Point2 start_point() const { return points.front(); }
    Point2 end_point() const { return points.back(); }
};

// Half-plane strip of half-width r: band coordinates are x across the strip
// (zero on the axis) and y along axis_direction.
struct Band {
    Point2 axis_origin;
    Point2 axis_direction;  // unit vector along the band axis
    double half_width = 1.0;

    Band(Point2 origin, Point2 direction, double half_width_in);

    double band_x(Point2 p) const {
        const Point2 ex{axis_direction.y, -axis_direction.x};
        return dot(p - axis_origin, ex);
    }
    double band_y(Point2 p) const { return dot(p - axis_origin, axis_direction); }
};

double total_length(const CsCurve& c);
double total_length(const SampledCurve& c);

// Joins two curves end-to-start. Positions must match within kEpsJoin; the
// tangent directions are deliberately unconstrained (a corner, even a full
// reversal, is representable — validate_cs is the arbiter of smoothness).
CsCurve concatenate(const CsCurve& a, const CsCurve& b);

CsCurve reverse(const CsCurve& curve);

// Points at arc-length steps of at most `spacing`, endpoints included;
// cumulative lengths are the exact arc lengths, not chord sums.
SampledCurve sample(const CsCurve& curve, double spacing);

// Restriction of the curve to [s0, s1] (0 <= s0 < s1 <= length).
CsCurve subcurve(const CsCurve& curve, double s0, double s1);

CsCurve translated(const CsCurve& curve, Point2 delta);
CsCurve rotated(const CsCurve& curve, Point2 pivot, double angle);

// All parameter pairs t1 < t2 whose tangents point in opposite directions
// (within kEpsAngle). Families of such pairs (e.g. two antiparallel
// segments, or any arc longer than a half turn) are reported by the family
// midpoint; isolated pairs are reported exactly.
std::vector<std::pair<double, double>> find_parallel_tangents(const CsCurve& c);
std::vector<std::pair<double, double>> find_parallel_tangents(
    const SampledCurve& c);

// Two parameters whose points lie strictly beyond the band's two edge lines
// (one on each side), if any; such points are automatically at distance
// greater than twice the half-width.
std::optional<std::pair<double, double>> find_cross_section(const CsCurve& c,
                                                            const Band& band);
std::optional<std::pair<double, double>> find_cross_section(
    const SampledCurve& c, const Band& band);

// All transverse parameter pairs (t1 < t2) at which the image repeats.
// Coincidences at joints between consecutive components and the start/end
// identification of a closed curve are not intersections.
std::vector<std::pair<double, double>> self_intersections(const CsCurve& c);

// Seeded random walk of arcs and segments from x, closed up to y by an
// arc-segment-arc solve; always returns a curve that passes validate_cs.
// When x and y coincide, draws are redrawn until the net turning of the
// closed loop is one full turn, which keeps the loop unwindable in place.
CsCurve random_curve(Point2 x, Point2 y, KappaParams kappa,
                     int complexity_budget, std::uint64_t seed);

}  // namespace kcurve
