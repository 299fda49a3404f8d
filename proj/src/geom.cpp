#include "kcurve/geom.hpp"

#include <algorithm>
#include <sstream>

namespace kcurve {

namespace {

std::string describe(const Config& c) {
    std::ostringstream os;
    os << "((" << c.position.x << ", " << c.position.y << "), heading "
       << c.heading << ")";
    return os.str();
}

}  // namespace

double component_length(const Component& c) {
    return std::visit([](const auto& k) { return k.length(); }, c);
}

Point2 component_point_at(const Component& c, double s) {
    return std::visit([&](const auto& k) { return k.point_at(s); }, c);
}

double component_heading_at(const Component& c, double s) {
    if (const auto* arc = std::get_if<ArcComponent>(&c)) return arc->heading_at(s);
    return std::get<SegmentComponent>(c).heading();
}

Config component_start(const Component& c) {
    return {component_point_at(c, 0.0), component_heading_at(c, 0.0)};
}

Config component_end(const Component& c) {
    const double len = component_length(c);
    return {component_point_at(c, len), component_heading_at(c, len)};
}

Component reverse_component(const Component& c) {
    if (const auto* arc = std::get_if<ArcComponent>(&c)) {
        ArcComponent r = *arc;
        r.start_angle = arc->start_angle + arc->sweep;
        r.sweep = -arc->sweep;
        return r;
    }
    const auto& seg = std::get<SegmentComponent>(c);
    return SegmentComponent{seg.end, seg.start};
}

std::pair<double, double> distance_range_to_point(const Component& c, Point2 p) {
    if (const auto* seg = std::get_if<SegmentComponent>(&c)) {
        const Point2 d = seg->end - seg->start;
        const double len2 = dot(d, d);
        const double t = len2 > 0.0 ? std::clamp(dot(p - seg->start, d) / len2, 0.0, 1.0) : 0.0;
        const double dmin = distance(p, seg->start + t * d);
        const double dmax = std::max(distance(p, seg->start), distance(p, seg->end));
        return {dmin, dmax};
    }
    const auto& arc = std::get<ArcComponent>(c);
    const Point2 w = arc.center - p;
    const double d0 = norm(w);
    double dmin = std::min(distance(p, arc.start_point()), distance(p, arc.end_point()));
    double dmax = std::max(distance(p, arc.start_point()), distance(p, arc.end_point()));
    if (d0 < 1e-15) return {arc.radius, arc.radius};
    auto contains_angle = [&](double phi) {
        const double delta = (arc.sweep > 0.0) ? mod_two_pi(phi - arc.start_angle)
                                               : mod_two_pi(arc.start_angle - phi);
        return delta <= std::fabs(arc.sweep);
    };
    const double toward = angle_of(p - arc.center);
    if (contains_angle(toward)) dmin = std::min(dmin, std::fabs(d0 - arc.radius));
    if (contains_angle(toward + kPi)) dmax = std::max(dmax, d0 + arc.radius);
    return {dmin, dmax};
}

CsCurve::CsCurve(KappaParams kappa, std::vector<Component> components)
    : kappa_(kappa) {
    components_.reserve(components.size());
    for (auto& c : components) {
        if (const auto* arc = std::get_if<ArcComponent>(&c)) {
            if (!(arc->radius > 0.0))
                throw DomainError("arc radius must be positive");
        }
        if (component_length(c) < kEpsDegenerate) continue;
        components_.push_back(std::move(c));
    }
    if (components_.empty())
        throw DomainError("curve must have at least one non-degenerate component");
    cum_.resize(components_.size() + 1);
    cum_[0] = 0.0;
    for (std::size_t i = 0; i < components_.size(); ++i)
        cum_[i + 1] = cum_[i] + component_length(components_[i]);
}

std::pair<std::size_t, double> CsCurve::locate(double s) const {
    const double len = total_length();
    if (s < -kTol || s > len + kTol)
        throw DomainError("arc length parameter out of range");
    s = std::clamp(s, 0.0, len);
    auto it = std::upper_bound(cum_.begin(), cum_.end(), s);
    std::size_t i = (it == cum_.begin())
                        ? 0
                        : static_cast<std::size_t>(it - cum_.begin()) - 1;
    if (i >= components_.size()) i = components_.size() - 1;
    return {i, s - cum_[i]};
}

Point2 CsCurve::evaluate(double s) const {
    auto [i, local] = locate(s);
    return component_point_at(components_[i], local);
}

double CsCurve::tangent(double s) const {
    auto [i, local] = locate(s);
    return component_heading_at(components_[i], local);
}

Config CsCurve::config_at(double s) const {
    auto [i, local] = locate(s);
    return {component_point_at(components_[i], local),
            component_heading_at(components_[i], local)};
}

SampledCurve::SampledCurve(KappaParams kappa_in, std::vector<Point2> pts,
                           std::vector<double> cum)
    : kappa(kappa_in), points(std::move(pts)), cumulative_lengths(std::move(cum)) {
    if (points.size() < 2)
        throw DomainError("sampled curve needs at least two points");
    if (cumulative_lengths.size() != points.size())
        throw DomainError("cumulative lengths must match the point count");
    if (cumulative_lengths.front() != 0.0)
        throw DomainError("cumulative lengths must start at zero");
    for (std::size_t i = 1; i < cumulative_lengths.size(); ++i)
        if (cumulative_lengths[i] < cumulative_lengths[i - 1])
            throw DomainError("cumulative lengths must be nondecreasing");
}

Point2 SampledCurve::evaluate(double s) const {
    const double len = total_length();
    if (s < -kTol || s > len + kTol)
        throw DomainError("arc length parameter out of range");
    s = std::clamp(s, 0.0, len);
    auto it = std::upper_bound(cumulative_lengths.begin(),
                               cumulative_lengths.end(), s);
    std::size_t i = (it == cumulative_lengths.begin())
                        ? 0
                        : static_cast<std::size_t>(it - cumulative_lengths.begin()) - 1;
    if (i + 1 >= points.size()) i = points.size() - 2;
    const double a = cumulative_lengths[i];
    const double b = cumulative_lengths[i + 1];
    const double t = (b > a) ? (s - a) / (b - a) : 0.0;
    return points[i] + t * (points[i + 1] - points[i]);
}

double SampledCurve::tangent(double s) const {
    const double len = total_length();
    if (s < -kTol || s > len + kTol)
        throw DomainError("arc length parameter out of range");
    s = std::clamp(s, 0.0, len);
    auto it = std::upper_bound(cumulative_lengths.begin(),
                               cumulative_lengths.end(), s);
    std::size_t i = (it == cumulative_lengths.begin())
                        ? 0
                        : static_cast<std::size_t>(it - cumulative_lengths.begin()) - 1;
    if (i + 1 >= points.size()) i = points.size() - 2;
    return angle_of(points[i + 1] - points[i]);
}

double SampledCurve::vertex_tangent(std::size_t i) const {
    if (i == 0) return angle_of(points[1] - points[0]);
    if (i + 1 >= points.size())
        return angle_of(points[points.size() - 1] - points[points.size() - 2]);
    const Point2 a = points[i] - points[i - 1];
    const Point2 b = points[i + 1] - points[i];
    Point2 mean = (1.0 / std::max(norm(a), 1e-300)) * a +
                  (1.0 / std::max(norm(b), 1e-300)) * b;
    if (norm(mean) < 1e-12) return angle_of(b);
    return angle_of(mean);
}

Band::Band(Point2 origin, Point2 direction, double half_width_in)
    : axis_origin(origin), axis_direction(direction), half_width(half_width_in) {
    const double n = norm(direction);
    if (!(n > 0.0)) throw DomainError("band axis direction must be nonzero");
    axis_direction = (1.0 / n) * direction;
    if (!(half_width > 0.0)) throw DomainError("band half-width must be positive");
}

double total_length(const CsCurve& c) { return c.total_length(); }
double total_length(const SampledCurve& c) { return c.total_length(); }

CsCurve concatenate(const CsCurve& a, const CsCurve& b) {
    const Config ea = a.end_config();
    const Config sb = b.start_config();
    const double gap = distance(ea.position, sb.position);
    if (gap > kEpsJoin) {
        throw DomainError("concatenation endpoints disagree: first curve ends at " +
                          describe(ea) + ", second starts at " + describe(sb));
    }
    std::vector<Component> comps = a.components();
    comps.insert(comps.end(), b.components().begin(), b.components().end());
    return CsCurve(a.kappa(), std::move(comps));
}

CsCurve reverse(const CsCurve& curve) {
    std::vector<Component> comps;
    comps.reserve(curve.complexity());
    for (auto it = curve.components().rbegin(); it != curve.components().rend(); ++it)
        comps.push_back(reverse_component(*it));
    return CsCurve(curve.kappa(), std::move(comps));
}

SampledCurve sample(const CsCurve& curve, double spacing) {
    if (!(spacing > 0.0)) throw DomainError("sampling spacing must be positive");
    const double len = curve.total_length();
    const std::size_t steps =
        std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil(len / spacing)));
    std::vector<Point2> pts;
    std::vector<double> cum;
    pts.reserve(steps + 1);
    cum.reserve(steps + 1);
    for (std::size_t i = 0; i <= steps; ++i) {
        const double s = len * static_cast<double>(i) / static_cast<double>(steps);
        pts.push_back(curve.evaluate(s));
        cum.push_back(s);
    }
    return SampledCurve(curve.kappa(), std::move(pts), std::move(cum));
}

namespace {

Component clip_component(const Component& c, double s0, double s1) {
    if (const auto* arc = std::get_if<ArcComponent>(&c)) {
        ArcComponent out = *arc;
        out.start_angle = arc->angle_at(s0);
        out.sweep = std::copysign((s1 - s0) / arc->radius, arc->sweep);
        return out;
    }
    const auto& seg = std::get<SegmentComponent>(c);
    return SegmentComponent{seg.point_at(s0), seg.point_at(s1)};
}

}  // namespace

CsCurve subcurve(const CsCurve& curve, double s0, double s1) {
    const double len = curve.total_length();
    if (s0 < -kTol || s1 > len + kTol || s1 - s0 < kEpsDegenerate)
        throw DomainError("subcurve range is empty or out of bounds");
    s0 = std::clamp(s0, 0.0, len);
    s1 = std::clamp(s1, 0.0, len);
    auto [i0, l0] = curve.locate(s0);
    auto [i1, l1] = curve.locate(s1);
    if (l1 <= kEpsDegenerate && i1 > 0) {
        --i1;
        l1 = component_length(curve.components()[i1]);
    }
    std::vector<Component> comps;
    if (i0 == i1) {
        comps.push_back(clip_component(curve.components()[i0], l0, l1));
    } else {
        comps.push_back(clip_component(curve.components()[i0], l0,
                                       component_length(curve.components()[i0])));
        for (std::size_t i = i0 + 1; i < i1; ++i)
            comps.push_back(curve.components()[i]);
        comps.push_back(clip_component(curve.components()[i1], 0.0, l1));
    }
    return CsCurve(curve.kappa(), std::move(comps));
}

CsCurve translated(const CsCurve& curve, Point2 delta) {
    std::vector<Component> comps;
    comps.reserve(curve.complexity());
    for (const auto& c : curve.components()) {
        if (const auto* arc = std::get_if<ArcComponent>(&c)) {
            ArcComponent a = *arc;
            a.center = a.center + delta;
            comps.push_back(a);
        } else {
            const auto& seg = std::get<SegmentComponent>(c);
            comps.push_back(SegmentComponent{seg.start + delta, seg.end + delta});
        }
    }
    return CsCurve(curve.kappa(), std::move(comps));
}

CsCurve rotated(const CsCurve& curve, Point2 pivot, double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    auto rot = [&](Point2 p) {
        const Point2 v = p - pivot;
        return pivot + Point2{c * v.x - s * v.y, s * v.x + c * v.y};
    };
    std::vector<Component> comps;
    comps.reserve(curve.complexity());
    for (const auto& comp : curve.components()) {
        if (const auto* arc = std::get_if<ArcComponent>(&comp)) {
            ArcComponent a = *arc;
            a.center = rot(a.center);
            a.start_angle = arc->start_angle + angle;
            comps.push_back(a);
        } else {
            const auto& seg = std::get<SegmentComponent>(comp);
            comps.push_back(SegmentComponent{rot(seg.start), rot(seg.end)});
        }
    }
    return CsCurve(curve.kappa(), std::move(comps));
}

namespace {

// Piece of a curve on which the tangent direction is an affine function of
// arc length, using a lifted (unwrapped) angle so that pieces chain
// continuously across joints.
struct TangentPiece {
    double s0, s1;      // global arc-length range
    double theta0;      // lifted tangent angle at s0
    double slope;       // d(theta)/ds
    bool allow_same;    // pairs within this piece are meaningful (arcs only)

    double theta_at(double s) const { return theta0 + slope * (s - s0); }
};

std::vector<TangentPiece> tangent_pieces(const CsCurve& c) {
    std::vector<TangentPiece> pieces;
    double lift = 0.0;
    bool first = true;
    const auto& cum = c.cumulative_lengths();
    for (std::size_t i = 0; i < c.complexity(); ++i) {
        const Component& comp = c.components()[i];
        const double h0 = component_heading_at(comp, 0.0);
        if (first) {
            lift = h0;
            first = false;
        } else {
            lift += angle_diff(h0, normalize_angle(lift));
        }
        double slope = 0.0;
        bool same = false;
        if (const auto* arc = std::get_if<ArcComponent>(&comp)) {
            slope = std::copysign(1.0 / arc->radius, arc->sweep);
            same = true;
        }
        const double len = component_length(comp);
        pieces.push_back({cum[i], cum[i] + len, lift, slope, same});
        lift += slope * len;
    }
    return pieces;
}

std::vector<TangentPiece> tangent_pieces(const SampledCurve& c) {
    // Linear interpolation between vertex tangent estimates.
    std::vector<TangentPiece> pieces;
    double lift = 0.0;
    bool first = true;
    for (std::size_t i = 0; i + 1 < c.points.size(); ++i) {
        const double t0 = c.vertex_tangent(i);
        const double t1 = c.vertex_tangent(i + 1);
        if (first) {
            lift = t0;
            first = false;
        } else {
            lift += angle_diff(t0, normalize_angle(lift));
        }
        const double s0 = c.cumulative_lengths[i];
        const double s1 = c.cumulative_lengths[i + 1];
        const double dtheta = angle_diff(t1, t0);
        const double slope = (s1 > s0) ? dtheta / (s1 - s0) : 0.0;
        pieces.push_back({s0, s1, lift, slope, std::fabs(slope) > 1e-12});
        lift += dtheta;
    }
    return pieces;
}

void emit_pair(std::vector<std::pair<double, double>>& out, double t1, double t2,
               double scale) {
    if (t2 - t1 < 1e-9) return;
    for (const auto& p : out)
        if (std::fabs(p.first - t1) < 1e-7 * scale && std::fabs(p.second - t2) < 1e-7 * scale)
            return;
    out.emplace_back(t1, t2);
}

std::vector<std::pair<double, double>> parallel_tangents_impl(
    const std::vector<TangentPiece>& pieces, double total_len) {
    std::vector<std::pair<double, double>> out;
    const double scale = 1.0 + total_len;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        for (std::size_t j = i; j < pieces.size(); ++j) {
            const TangentPiece& A = pieces[i];
            const TangentPiece& B = pieces[j];
            if (i == j && !A.allow_same) continue;
            // Solve theta_B(t2) - theta_A(t1) = pi + 2*pi*k on the rectangle.
            const double dmin = std::min(B.theta_at(B.s0), B.theta_at(B.s1)) -
                                std::max(A.theta_at(A.s0), A.theta_at(A.s1));
            const double dmax = std::max(B.theta_at(B.s0), B.theta_at(B.s1)) -
                                std::min(A.theta_at(A.s0), A.theta_at(A.s1));
            const int kmin = static_cast<int>(std::floor((dmin - kPi) / kTwoPi)) - 1;
            const int kmax = static_cast<int>(std::ceil((dmax - kPi) / kTwoPi)) + 1;
            for (int k = kmin; k <= kmax; ++k) {
                const double target = kPi + kTwoPi * k;
                if (target < dmin - kEpsAngle || target > dmax + kEpsAngle) continue;
                if (A.slope == 0.0 && B.slope == 0.0) {
                    const double gap = B.theta0 - A.theta0 - target;
                    if (std::fabs(gap) > kEpsAngle) continue;
                    emit_pair(out, 0.5 * (A.s0 + A.s1), 0.5 * (B.s0 + B.s1), scale);
                    continue;
                }
                if (i == j) {
                    // Same arc: t2 - t1 = target / slope.
                    const double gap = target / A.slope;
                    if (gap <= 1e-12 || gap > (A.s1 - A.s0)) continue;
                    const double lo = A.s0, hi = A.s1 - gap;
                    const double mid = 0.5 * (lo + hi);
                    emit_pair(out, mid, mid + gap, scale);
                    continue;
                }
                if (B.slope == 0.0) {
                    // t1 is pinned; all of piece B pairs with it.
                    const double t1 = A.s0 + (B.theta0 - A.theta0 - target) / A.slope;
                    if (t1 < A.s0 - 1e-12 || t1 > A.s1 + 1e-12) continue;
                    emit_pair(out, std::clamp(t1, A.s0, A.s1), 0.5 * (B.s0 + B.s1),
                              scale);
                    continue;
                }
                // t2 as a function of t1; clip the line to the rectangle.
                auto t2_of = [&](double t1) {
                    return B.s0 + (target + A.theta_at(t1) - B.theta0) / B.slope;
                };
                double lo = A.s0, hi = A.s1;
                // Constrain t2(t1) in [B.s0, B.s1].
                const double u0 = t2_of(A.s0), u1 = t2_of(A.s1);
                const double du = (u1 - u0) / (A.s1 - A.s0);
                if (std::fabs(du) < 1e-15) {
                    if (u0 < B.s0 - 1e-12 || u0 > B.s1 + 1e-12) continue;
                } else {
                    double a = (B.s0 - u0) / du + A.s0;
                    double b = (B.s1 - u0) / du + A.s0;
                    if (a > b) std::swap(a, b);
                    lo = std::max(lo, a);
                    hi = std::min(hi, b);
                }
                if (lo > hi + 1e-12) continue;
                const double mid = std::clamp(0.5 * (lo + hi), A.s0, A.s1);
                const double t2 = std::clamp(t2_of(mid), B.s0, B.s1);
                emit_pair(out, mid, t2, scale);
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

std::vector<std::pair<double, double>> find_parallel_tangents(const CsCurve& c) {
    return parallel_tangents_impl(tangent_pieces(c), c.total_length());
}

std::vector<std::pair<double, double>> find_parallel_tangents(
    const SampledCurve& c) {
    return parallel_tangents_impl(tangent_pieces(c), c.total_length());
}

namespace {

struct Extreme {
    double value;
    double param;
};

void consider(Extreme& lo, Extreme& hi, double value, double param) {
    if (value < lo.value) lo = {value, param};
    if (value > hi.value) hi = {value, param};
}

}  // namespace

std::optional<std::pair<double, double>> find_cross_section(const CsCurve& c,
                                                            const Band& band) {
    const Point2 ex{band.axis_direction.y, -band.axis_direction.x};
    Extreme lo{1e300, 0.0}, hi{-1e300, 0.0};
    const auto& cum = c.cumulative_lengths();
    for (std::size_t i = 0; i < c.complexity(); ++i) {
        const Component& comp = c.components()[i];
        const double len = component_length(comp);
        consider(lo, hi, band.band_x(component_point_at(comp, 0.0)), cum[i]);
        consider(lo, hi, band.band_x(component_point_at(comp, len)), cum[i] + len);
        if (const auto* arc = std::get_if<ArcComponent>(&comp)) {
            // Interior extrema of the band coordinate along the arc.
            const double phi_ex = angle_of(ex);
            for (const double phi : {phi_ex, phi_ex + kPi}) {
                const double delta = (arc->sweep > 0.0)
                                         ? mod_two_pi(phi - arc->start_angle)
                                         : mod_two_pi(arc->start_angle - phi);
                const double s = arc->radius * delta;
                if (s <= len) {
                    consider(lo, hi, band.band_x(arc->point_at(s)), cum[i] + s);
                }
            }
        }
    }
    if (lo.value < -band.half_width && hi.value > band.half_width) {
        double t1 = lo.param, t2 = hi.param;
        if (t1 > t2) std::swap(t1, t2);
        return std::make_pair(t1, t2);
    }
    return std::nullopt;
}

std::optional<std::pair<double, double>> find_cross_section(
    const SampledCurve& c, const Band& band) {
    Extreme lo{1e300, 0.0}, hi{-1e300, 0.0};
    for (std::size_t i = 0; i < c.points.size(); ++i)
        consider(lo, hi, band.band_x(c.points[i]), c.cumulative_lengths[i]);
    if (lo.value < -band.half_width && hi.value > band.half_width) {
        double t1 = lo.param, t2 = hi.param;
        if (t1 > t2) std::swap(t1, t2);
        return std::make_pair(t1, t2);
    }
    return std::nullopt;
}

namespace {

// Local arc length of polar angle phi on the arc, if the angle lies within
// the swept range (with a small slack).
std::optional<double> arc_param_of_angle(const ArcComponent& arc, double phi) {
    const double slack = kEpsJoin / arc.radius;
    const double delta = (arc.sweep > 0.0) ? mod_two_pi(phi - arc.start_angle)
                                           : mod_two_pi(arc.start_angle - phi);
    if (delta <= std::fabs(arc.sweep) + slack)
        return arc.radius * std::min(delta, std::fabs(arc.sweep));
    // A full-circle wrap can place the start angle itself just outside.
    if (kTwoPi - delta <= slack) return 0.0;
    return std::nullopt;
}

void seg_seg_hits(const SegmentComponent& a, const SegmentComponent& b,
                  std::vector<std::pair<double, double>>& hits) {
    const Point2 d1 = a.end - a.start;
    const Point2 d2 = b.end - b.start;
    const double den = cross(d1, d2);
    const double scale = std::max({norm(d1), norm(d2), 1e-12});
    if (std::fabs(den) < 1e-14 * scale * scale) {
        // Parallel. Report only an isolated endpoint touch of collinear
        // segments; overlaps repeat a whole sub-image and are not transverse.
        if (std::fabs(cross(d2, a.start - b.start)) > 1e-12 * scale * scale) return;
        const double lb = norm(d2);
        auto proj = [&](Point2 p) { return dot(p - b.start, d2) / lb; };
        double u0 = proj(a.start), u1 = proj(a.end);
        if (u0 > u1) std::swap(u0, u1);
        const double olo = std::max(u0, 0.0), ohi = std::min(u1, lb);
        if (std::fabs(ohi - olo) < 1e-12 && olo >= -1e-12 && olo <= lb + 1e-12) {
            const double u = 0.5 * (olo + ohi);
            const Point2 p = b.start + (u / lb) * d2;
            hits.emplace_back(norm(p - a.start), u);
        }
        return;
    }
    const double t = cross(b.start - a.start, d2) / den;
    const double u = cross(b.start - a.start, d1) / den;
    if (t < -1e-12 || t > 1.0 + 1e-12 || u < -1e-12 || u > 1.0 + 1e-12) return;
    hits.emplace_back(std::clamp(t, 0.0, 1.0) * norm(d1),
                      std::clamp(u, 0.0, 1.0) * norm(d2));
}

void seg_arc_hits(const SegmentComponent& seg, const ArcComponent& arc,
                  bool seg_first, std::vector<std::pair<double, double>>& hits) {
    const Point2 d = seg.end - seg.start;
    const double len = norm(d);
    const Point2 f = seg.start - arc.center;
    const double A = dot(d, d);
    const double B = 2.0 * dot(f, d);
    const double C = dot(f, f) - arc.radius * arc.radius;
    double disc = B * B - 4.0 * A * C;
    if (disc < -1e-12 * A * A) return;
    disc = std::max(disc, 0.0);
    const double sq = std::sqrt(disc);
    double roots[2] = {(-B - sq) / (2.0 * A), (-B + sq) / (2.0 * A)};
    const int nroots = (sq < 1e-12) ? 1 : 2;
    for (int k = 0; k < nroots; ++k) {
        const double t = roots[k];
        if (t < -1e-12 || t > 1.0 + 1e-12) continue;
        const Point2 p = seg.start + std::clamp(t, 0.0, 1.0) * d;
        const auto sa = arc_param_of_angle(arc, angle_of(p - arc.center));
        if (!sa) continue;
        const double s_seg = std::clamp(t, 0.0, 1.0) * len;
        if (seg_first)
            hits.emplace_back(s_seg, *sa);
        else
            hits.emplace_back(*sa, s_seg);
    }
}

void arc_arc_hits(const ArcComponent& a, const ArcComponent& b,
                  std::vector<std::pair<double, double>>& hits) {
    const Point2 dc = b.center - a.center;
    const double D = norm(dc);
    if (D < 1e-12 && std::fabs(a.radius - b.radius) < 1e-12) return;  // same circle
    if (D < 1e-12) return;
    if (D > a.radius + b.radius + 1e-12) return;
    if (D < std::fabs(a.radius - b.radius) - 1e-12) return;
    const double alpha = (D * D + a.radius * a.radius - b.radius * b.radius) / (2.0 * D);
    double h2 = a.radius * a.radius - alpha * alpha;
    if (h2 < -1e-10) return;
    h2 = std::max(h2, 0.0);
    const double h = std::sqrt(h2);
    const Point2 u = (1.0 / D) * dc;
    const Point2 base = a.center + alpha * u;
    const int npts = (h < 1e-9) ? 1 : 2;
    for (int k = 0; k < npts; ++k) {
        const double sign = (k == 0) ? 1.0 : -1.0;
        const Point2 p = base + sign * h * perp(u);
        const auto sa = arc_param_of_angle(a, angle_of(p - a.center));
        const auto sb = arc_param_of_angle(b, angle_of(p - b.center));
        if (sa && sb) hits.emplace_back(*sa, *sb);
    }
}

void component_hits(const Component& a, const Component& b,
                    std::vector<std::pair<double, double>>& hits) {
    if (const auto* s1 = std::get_if<SegmentComponent>(&a)) {
        if (const auto* s2 = std::get_if<SegmentComponent>(&b))
            seg_seg_hits(*s1, *s2, hits);
        else
            seg_arc_hits(*s1, std::get<ArcComponent>(b), true, hits);
    } else {
        const auto& a1 = std::get<ArcComponent>(a);
        if (const auto* s2 = std::get_if<SegmentComponent>(&b))
            seg_arc_hits(*s2, a1, false, hits);
        else
            arc_arc_hits(a1, std::get<ArcComponent>(b), hits);
    }
}

}  // namespace

std::vector<std::pair<double, double>> self_intersections(const CsCurve& c) {
    std::vector<std::pair<double, double>> out;
    const double L = c.total_length();
    const bool closed = c.is_closed();
    const double sep = 1e-6 * c.kappa().r;
    const auto& cum = c.cumulative_lengths();
    auto push = [&](double t1, double t2) {
        if (t1 > t2) std::swap(t1, t2);
        if (t2 - t1 < sep) return;
        if (closed && L - (t2 - t1) < sep) return;
        for (const auto& p : out)
            if (std::fabs(p.first - t1) < sep && std::fabs(p.second - t2) < sep)
                return;
        out.emplace_back(t1, t2);
    };
    std::vector<std::pair<double, double>> hits;
    for (std::size_t i = 0; i < c.complexity(); ++i) {
        // A single arc meets itself only where a full turn closes up.
        if (const auto* arc = std::get_if<ArcComponent>(&c.components()[i])) {
            if (std::fabs(arc->sweep) >= kTwoPi - 1e-12)
                push(cum[i], cum[i] + arc->length());
        }
        for (std::size_t j = i + 1; j < c.complexity(); ++j) {
            hits.clear();
            component_hits(c.components()[i], c.components()[j], hits);
            for (const auto& h : hits) push(cum[i] + h.first, cum[j] + h.second);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace kcurve
