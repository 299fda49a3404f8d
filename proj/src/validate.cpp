#include "kcurve/validate.hpp"

#include <algorithm>
#include <cmath>

namespace kcurve {

ValidationReport validate_cs(const CsCurve& curve) {
    ValidationReport rep;
    const double r = curve.kappa().r;
    const auto& cum = curve.cumulative_lengths();
    for (std::size_t i = 0; i < curve.complexity(); ++i) {
        const Component& c = curve.components()[i];
        if (const auto* arc = std::get_if<ArcComponent>(&c)) {
            const double k = 1.0 / arc->radius;
            rep.max_curvature = std::max(rep.max_curvature, k);
            if (arc->radius < r * (1.0 - kEpsRel))
                rep.add(cum[i], "curvature", k);
        }
        if (i == 0) continue;
        const Config prev = component_end(curve.components()[i - 1]);
        const Config next = component_start(c);
        const double pos_gap = distance(prev.position, next.position);
        const double ang_gap = std::fabs(angle_diff(next.heading, prev.heading));
        rep.worst_joint_gap = std::max({rep.worst_joint_gap, pos_gap, ang_gap});
        if (pos_gap > kEpsJoin) rep.add(cum[i], "joint_position", pos_gap);
        if (ang_gap > kEpsJoin) rep.add(cum[i], "joint_tangent", ang_gap);
    }
    return rep;
}

ValidationReport validate_sampled(const SampledCurve& curve) {
    ValidationReport rep;
    const auto& pts = curve.points;
    const auto& cum = curve.cumulative_lengths;
    if (pts.size() < 3) {
        rep.add(0.0, "too_few_points", static_cast<double>(pts.size()));
        return rep;
    }
    for (std::size_t i = 1; i < pts.size(); ++i) {
        const double chord = distance(pts[i], pts[i - 1]);
        if (chord < kEpsDegenerate)
            throw DomainError("sampled curve has duplicate consecutive points");
        const double step = cum[i] - cum[i - 1];
        const double excess = chord - step;
        rep.worst_joint_gap = std::max(rep.worst_joint_gap, excess);
        if (excess > kEpsJoin) rep.add(cum[i], "chord_exceeds_arc_length", excess);
    }
    const double bound = curve.kappa.kappa * (1.0 + kEpsRel);
    for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
        // Curvature of the circle through three consecutive points; exact
        // when the points lie on a circle.
        const Point2 a = pts[i - 1], b = pts[i], c = pts[i + 1];
        const double area2 = std::fabs(cross(b - a, c - a));
        const double la = distance(a, b), lb = distance(b, c), lc = distance(a, c);
        const double denom = la * lb * lc;
        const double k = denom > 0.0 ? 2.0 * area2 / denom : 0.0;
        rep.max_curvature = std::max(rep.max_curvature, k);
        if (k > bound) rep.add(cum[i], "curvature", k);
    }
    return rep;
}

bool check_radial_bound(const CsCurve& curve, double eta) {
    if (eta < 0.0) throw DomainError("winding angle must be nonnegative");
    const double r = curve.kappa().r;
    const double slack = 1e-7 * std::max(1.0, r);
    const SampledCurve s = sample(curve, r / 64.0);
    if (std::fabs(norm(s.points.front()) - r) > slack)
        throw DomainError("curve must start at distance r from the origin");
    double lift = 0.0;
    double max_lift = 0.0;
    double prev_angle = angle_of(s.points.front());
    for (std::size_t i = 0; i < s.points.size(); ++i) {
        if (norm(s.points[i]) < r - slack)
            throw DomainError("curve must stay outside the radius-r circle");
        const double a = angle_of(s.points[i]);
        lift += angle_diff(a, prev_angle);
        prev_angle = a;
        max_lift = std::max(max_lift, lift);
    }
    if (max_lift < eta - slack)
        throw DomainError("curve does not wind through the requested angle");
    return curve.total_length() >= r * eta - kTol;
}

bool check_vertical_bound(const CsCurve& curve) {
    if (norm(curve.start_point()) > kEpsJoin)
        throw DomainError("curve must start at the origin");
    const double z = curve.end_point().y;
    if (z < -kEpsJoin) throw DomainError("curve must end at nonnegative height");
    return curve.total_length() >= z - kTol;
}

DichotomyResult check_disk_dichotomy(const CsCurve& curve, const Disk& disk) {
    const double r = curve.kappa().r;
    if (std::fabs(disk.radius - r) > kEpsJoin)
        throw DomainError("the dichotomy applies to disks of the turning radius");
    double dmin = 1e300, dmax = -1e300;
    for (const auto& c : curve.components()) {
        const auto [lo, hi] = distance_range_to_point(c, disk.center);
        dmin = std::min(dmin, lo);
        dmax = std::max(dmax, hi);
    }
    if (dmax > disk.radius + kEpsJoin)
        throw DomainError("curve must lie inside the closed disk");
    if (dmin >= disk.radius - kEpsJoin) return DichotomyResult::OnBoundary;
    // Interior of the curve only: ignore a short run at each end, where
    // boundary contact is permitted.
    const double len = curve.total_length();
    const double margin = std::min(0.02 * r, 0.4 * len);
    double core_max = -1e300;
    const CsCurve core = subcurve(curve, margin, len - margin);
    for (const auto& c : core.components()) {
        const auto [lo, hi] = distance_range_to_point(c, disk.center);
        (void)lo;
        core_max = std::max(core_max, hi);
    }
    const bool touches_inside = core_max >= disk.radius - kEpsJoin;
    const bool leaves_boundary = dmin <= disk.radius - 1e-3;
    if (touches_inside && leaves_boundary) return DichotomyResult::Violation;
    return DichotomyResult::InteriorDisjoint;
}

bool check_band_escape(const CsCurve& curve, const Disk& circle) {
    const double r = curve.kappa().r;
    if (std::fabs(circle.radius - r) > kEpsJoin)
        throw DomainError("the escape bound applies to circles of the turning radius");
    if (std::fabs(circle.center.x) > kEpsJoin || circle.center.y > kEpsJoin)
        throw DomainError("circle center must lie on the nonpositive y-axis");
    const Point2 a = curve.start_point();
    const Point2 b = curve.end_point();
    for (const Point2 p : {a, b}) {
        if (std::fabs(p.y) > 1e-7)
            throw DomainError("curve endpoints must lie on the horizontal axis");
        if (std::fabs(distance(p, circle.center) - circle.radius) > 1e-7)
            throw DomainError("curve endpoints must lie on the circle");
    }
    const SampledCurve s = sample(curve, r / 512.0);
    for (const Point2 p : s.points) {
        if (std::fabs(p.x) > r + 1e-7)
            throw DomainError("curve must stay inside the band");
        if (p.y < -1e-7)
            throw DomainError("curve must stay in the upper half-plane");
    }
    for (const Point2 p : s.points) {
        const double dx = p.x - circle.center.x;
        if (std::fabs(dx) > circle.radius) continue;
        const double top =
            circle.center.y + std::sqrt(std::max(
                                  circle.radius * circle.radius - dx * dx, 0.0));
        if (p.y > top + kTol) return false;
    }
    return true;
}

}  // namespace kcurve
