#include "kcurve/regions.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "kcurve/csc.hpp"
#include "kcurve/errors.hpp"

namespace kcurve {

std::string region_name(RegionTag tag) {
    switch (tag) {
        case RegionTag::InteriorLens: return "interior_lens";
        case RegionTag::LensBoundary: return "lens_boundary";
        case RegionTag::InteriorE: return "interior_e";
        case RegionTag::OuterBoundary: return "outer_boundary";
        case RegionTag::OutsideU: return "outside_u";
    }
    return "unknown";
}

std::string label_name(ClassLabel label) {
    switch (label) {
        case ClassLabel::Closed: return "closed";
        case ClassLabel::InLens: return "in_lens";
        case ClassLabel::NotInLens: return "not_in_lens";
        case ClassLabel::Unrestricted: return "unrestricted";
    }
    return "unknown";
}

LensGeometry build_lens(Point2 x, Point2 y, KappaParams kappa) {
    const double d = distance(x, y);
    const double r = kappa.r;
    if (d <= kEpsDegenerate) {
        throw DomainError(
            "build_lens: endpoints coincide; the lens degenerates to the "
            "pencil of radius-r circles through the point");
    }
    if (d >= 2.0 * r) {
        std::ostringstream os;
        os << "build_lens: endpoint separation " << d
           << " is at least the diameter " << 2.0 * r
           << "; the two radius-r circles through both points do not exist";
        throw DomainError(os.str());
    }
    const double h = std::sqrt(r * r - 0.25 * d * d);
    const Point2 mid = 0.5 * (x + y);
    const Point2 u = (1.0 / d) * (y - x);
    const Point2 left_normal{-u.y, u.x};
    LensGeometry lens;
    lens.x = x;
    lens.y = y;
    lens.kappa = kappa;
    lens.d = d;
    lens.c1 = mid + h * left_normal;
    lens.c2 = mid - h * left_normal;
    return lens;
}

RegionTag classify_point(const LensGeometry& lens, Point2 p) {
    const double r = lens.kappa.r;
    const double d1 = distance(p, lens.c1);
    const double d2 = distance(p, lens.c2);
    const bool on1 = std::abs(d1 - r) <= kEpsRegion;
    const bool on2 = std::abs(d2 - r) <= kEpsRegion;
    const bool in1 = d1 < r + kEpsRegion;
    const bool in2 = d2 < r + kEpsRegion;
    if ((on1 && in2) || (on2 && in1)) return RegionTag::LensBoundary;
    if (on1 || on2) return RegionTag::OuterBoundary;
    if (d1 < r && d2 < r) return RegionTag::InteriorLens;
    if (d1 < r || d2 < r) return RegionTag::InteriorE;
    return RegionTag::OutsideU;
}

namespace {

void require_lens_endpoints(const LensGeometry& lens, Point2 a, Point2 b) {
    const bool forward = distance(a, lens.x) <= kEpsJoin &&
                         distance(b, lens.y) <= kEpsJoin;
    const bool backward = distance(a, lens.y) <= kEpsJoin &&
                          distance(b, lens.x) <= kEpsJoin;
    if (!forward && !backward) {
        throw DomainError(
            "curve_in_cl_lens: the curve does not join the lens endpoints");
    }
}

}  // namespace

bool curve_in_cl_lens(const LensGeometry& lens, const CsCurve& curve) {
    require_lens_endpoints(lens, curve.start_point(), curve.end_point());
    const double r = lens.kappa.r;
    for (const Component& comp : curve.components()) {
        const auto range1 = distance_range_to_point(comp, lens.c1);
        const auto range2 = distance_range_to_point(comp, lens.c2);
        const double worst = std::max(range1.second, range2.second);
        if (worst > r + kEpsRegion) return false;
    }
    return true;
}

bool curve_in_cl_lens(const LensGeometry& lens, const SampledCurve& curve) {
    require_lens_endpoints(lens, curve.points.front(), curve.points.back());
    const double r = lens.kappa.r;
    for (const Point2& p : curve.points) {
        const double worst =
            std::max(distance(p, lens.c1), distance(p, lens.c2));
        if (worst > r + kEpsRegion) return false;
    }
    return true;
}

int class_count(Point2 x, Point2 y, KappaParams kappa) {
    const double d = distance(x, y);
    if (d <= kEpsDegenerate) return 1;
    if (d < 2.0 * kappa.r) return 2;
    return 1;
}

namespace {

ValidationReport validate(const CsCurve& c) { return validate_cs(c); }
ValidationReport validate(const SampledCurve& c) { return validate_sampled(c); }

template <typename CurveT>
ClassLabel label_impl(const CurveT& curve, Point2 a, Point2 b,
                      KappaParams kappa) {
    const ValidationReport report = validate(curve);
    if (!report.valid) {
        std::ostringstream os;
        os << "class_label: curve fails validation ("
           << report.violations.size() << " violation(s); first kind: "
           << (report.violations.empty() ? std::string("none")
                                         : report.violations.front().kind)
           << ")";
        throw ValidationError(os.str());
    }
    const double d = distance(a, b);
    if (d <= kEpsDegenerate) return ClassLabel::Closed;
    if (d >= 2.0 * kappa.r) return ClassLabel::Unrestricted;
    const LensGeometry lens = build_lens(a, b, kappa);
    return curve_in_cl_lens(lens, curve) ? ClassLabel::InLens
                                         : ClassLabel::NotInLens;
}

}  // namespace

ClassLabel class_label(const CsCurve& curve) {
    return label_impl(curve, curve.start_point(), curve.end_point(),
                      curve.kappa());
}

ClassLabel class_label(const SampledCurve& curve) {
    return label_impl(curve, curve.points.front(), curve.points.back(),
                      curve.kappa);
}

bool are_homotopic(const CsCurve& a, const CsCurve& b) {
    if (distance(a.start_point(), b.start_point()) > kEpsJoin ||
        distance(a.end_point(), b.end_point()) > kEpsJoin) {
        throw DomainError(
            "are_homotopic: the curves do not share endpoints");
    }
    return class_label(a) == class_label(b);
}

namespace {

// Random valid curve from x to y whose first heading is biased toward a
// target point; used to probe the one-disk-only region near a lobe.
CsCurve biased_probe(Point2 x, Point2 y, KappaParams kappa, Point2 aim,
                     int budget, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> jitter(-0.3, 0.3);
    std::uniform_real_distribution<double> sweep_dist(-kPi / 2.0, kPi / 2.0);
    std::uniform_real_distribution<double> len_dist(0.0, kappa.r);
    std::bernoulli_distribution coin(0.5);

    const double base = angle_of(aim - x);
    Config current{x, base + jitter(rng)};
    std::vector<Component> comps;
    for (int i = 0; i + 3 < budget; ++i) {
        if (coin(rng)) {
            double sweep = sweep_dist(rng);
            while (std::abs(sweep) < 0.05) sweep = sweep_dist(rng);
            const double side = sweep > 0.0 ? 1.0 : -1.0;
            const Point2 center =
                current.position +
                kappa.r * Point2{std::cos(current.heading + side * kPi / 2.0),
                                 std::sin(current.heading + side * kPi / 2.0)};
            const double start_angle =
                angle_of(current.position - center);
            ArcComponent arc{center, kappa.r, start_angle, sweep};
            comps.push_back(arc);
            current = Config{arc.end_point(), arc.heading_at(arc.length())};
        } else {
            double len = len_dist(rng);
            while (len < 0.05 * kappa.r) len = len_dist(rng);
            const Point2 dir{std::cos(current.heading),
                             std::sin(current.heading)};
            SegmentComponent seg{current.position,
                                 current.position + len * dir};
            comps.push_back(seg);
            current = Config{seg.end, current.heading};
        }
    }
    std::uniform_real_distribution<double> head_dist(-kPi, kPi);
    const Config target{y, head_dist(rng)};
    const CscSolution closure = solve_csc(current, target, kappa);
    const CsCurve tail = csc_curve(current, closure.best(), kappa);
    for (const Component& comp : tail.components()) comps.push_back(comp);
    return CsCurve(kappa, comps);
}

bool interior_entirely_in_e(const LensGeometry& lens, const CsCurve& curve) {
    const double total = total_length(curve);
    const int n = 64;
    for (int i = 1; i < n; ++i) {
        const double s = total * static_cast<double>(i) / n;
        if (classify_point(lens, curve.evaluate(s)) != RegionTag::InteriorE)
            return false;
    }
    return true;
}

// Whether the curve stays in the closed union of the two disks while
// visiting the one-disk-only parts of both lobes.
bool crosses_both_lobes(const LensGeometry& lens, const CsCurve& curve) {
    const double r = lens.kappa.r;
    const double total = total_length(curve);
    const int n = 128;
    bool lobe1 = false;
    bool lobe2 = false;
    for (int i = 0; i <= n; ++i) {
        const double s = total * static_cast<double>(i) / n;
        const Point2 p = curve.evaluate(s);
        const double d1 = distance(p, lens.c1);
        const double d2 = distance(p, lens.c2);
        if (d1 > r + kEpsRegion && d2 > r + kEpsRegion) return false;
        if (d1 <= r + kEpsRegion && d2 > r + kEpsRegion) lobe1 = true;
        if (d2 <= r + kEpsRegion && d1 > r + kEpsRegion) lobe2 = true;
    }
    return lobe1 && lobe2;
}

}  // namespace

RegionSearchReport assert_no_curve_in_E(const LensGeometry& lens, int trials,
                                        std::uint64_t seed) {
    RegionSearchReport report;
    report.trials = trials;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> budget_dist(3, 6);
    std::bernoulli_distribution pick_lobe(0.5);
    for (int t = 0; t < trials; ++t) {
        const int budget = budget_dist(rng);
        const Point2 aim = pick_lobe(rng) ? lens.c1 : lens.c2;
        CsCurve probe = [&] {
            try {
                return biased_probe(lens.x, lens.y, lens.kappa, aim, budget,
                                    rng);
            } catch (const Error&) {
                // A degenerate draw; fall back to an unbiased curve.
                return random_curve(lens.x, lens.y, lens.kappa, budget,
                                    rng());
            }
        }();
        if (!validate_cs(probe).valid) continue;
        if (interior_entirely_in_e(lens, probe)) ++report.interior_in_e;
        if (crosses_both_lobes(lens, probe)) ++report.touches_both_lobes;
    }
    return report;
}

}  // namespace kcurve
