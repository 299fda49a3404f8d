#pragma once

#include <cstdint>
#include <string>
#include <variant>

#include "kcurve/geom.hpp"
#include "kcurve/validate.hpp"

namespace kcurve {

// The two radius-r circles through endpoints x and y (defined for
// 0 < |x-y| < 2r) and the plane regions they cut out: the lens-shaped
// intersection of the two disks, the rest of their union, and the outside.
struct LensGeometry {
    Point2 x;
    Point2 y;
    KappaParams kappa;
    double d = 0.0;  // |x - y|
    Point2 c1;       // center on the left of the ray x -> y
    Point2 c2;       // mirror center on the right
};

enum class RegionTag {
    InteriorLens,   // inside both disks
    LensBoundary,   // on a circle, within the other closed disk
    InteriorE,      // inside exactly one disk, outside the closed lens
    OuterBoundary,  // on a circle, outside the other open disk
    OutsideU        // outside both closed disks
};

enum class ClassLabel { Closed, InLens, NotInLens, Unrestricted };

std::string region_name(RegionTag tag);
std::string label_name(ClassLabel label);

using AnyCurve = std::variant<CsCurve, SampledCurve>;

LensGeometry build_lens(Point2 x, Point2 y, KappaParams kappa);

RegionTag classify_point(const LensGeometry& lens, Point2 p);

// Whether every point of the curve lies in the closed lens (within
// kEpsRegion). The curve must join the lens endpoints.
bool curve_in_cl_lens(const LensGeometry& lens, const CsCurve& curve);
bool curve_in_cl_lens(const LensGeometry& lens, const SampledCurve& curve);

// Number of homotopy classes of curvature-bounded curves joining x and y:
// 1 when the endpoints coincide, 2 when 0 < d < 2r, 1 when d >= 2r.
int class_count(Point2 x, Point2 y, KappaParams kappa);

// Which class a valid curve belongs to.
ClassLabel class_label(const CsCurve& curve);
ClassLabel class_label(const SampledCurve& curve);

// Same endpoints and same class label.
bool are_homotopic(const CsCurve& a, const CsCurve& b);

struct RegionSearchReport {
    int trials = 0;
    // Curves whose interior lies entirely in the one-disk-only region.
    int interior_in_e = 0;
    // Curves inside the union of the disks that visit both of its lobes
    // outside the closed lens.
    int touches_both_lobes = 0;
};

// Randomized search for a valid curve between the lens endpoints living
// entirely in the one-disk-only region; the search must come back empty.
RegionSearchReport assert_no_curve_in_E(const LensGeometry& lens, int trials,
                                        std::uint64_t seed);

}  // namespace kcurve
