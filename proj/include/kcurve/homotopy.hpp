#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kcurve/csc.hpp"
#include "kcurve/geom.hpp"
#include "kcurve/regions.hpp"
#include "kcurve/validate.hpp"

namespace kcurve {

// The elementary deformation kinds a trace can be annotated with: stretching
// apart two antiparallel tangents (TypeIII), twisting on a tangent disk
// (TypeI), re-joining a window by an arc-segment-arc connector (TypeII), and
// wholesale fragment replacement during normalization.
enum class MoveKind { TypeI, TypeII, TypeIII, FragmentReplacement };

std::string move_kind_name(MoveKind kind);

enum class TurnSide { Left, Right };

struct MoveAnnotation {
    MoveKind kind = MoveKind::TypeII;
    double p_begin = 0.0;
    double p_end = 1.0;
    std::string detail;
};

struct TraceFrame {
    double p = 0.0;
    CsCurve curve;
};

// A curvature-bounded deformation, discretized: frames at strictly
// increasing parameters p in [0,1] (first 0, last 1), each a valid curve
// with the same endpoints, consecutive frames close in C0.
struct HomotopyTrace {
    std::vector<TraceFrame> frames;
    std::vector<MoveAnnotation> moves;
    // Optional bound on the emitted inter-frame distance; verification uses
    // max(0.01*r, step_hint) as the allowed consecutive-frame C0 distance.
    double step_hint = 0.0;
};

// Checks a trace frame by frame; violation locations are frame indices.
ValidationReport verify_trace(const HomotopyTrace& trace);

// Pulls apart two curve points with opposite tangent directions, inserting
// a pair of straight rails of growing length ell*p between them; the final
// frame is exactly 2*ell longer. Requires tangent(t1) and tangent(t2)
// opposite within kEpsAngle.
HomotopyTrace move_type3(const CsCurve& curve, double t1, double t2,
                         double ell, int steps = 24);

// Wraps a growing arc around the radius-r disk tangent to the curve at
// arc length z on the chosen side, re-joining the displaced strand to the
// rest of the curve so both curve endpoints stay fixed.
HomotopyTrace move_type1(const CsCurve& curve, double z, TurnSide side,
                         double phi, int steps = 24);

// Replaces a growing prefix of the component window [first, first+count)
// by the shortest arc-segment-arc connector of its end configurations;
// length is nonincreasing in p.
HomotopyTrace move_type2(const CsCurve& curve, std::size_t first,
                         std::size_t count, int steps = 24);

// Best single length-decreasing window rewrite, emitted as a small trace;
// absent when no candidate decreases length by more than the relative
// tolerance 1e-10 * length.
std::optional<std::pair<CsCurve, HomotopyTrace>> reduce_step(
    const CsCurve& curve);

// Iterated reduce_step to a fixed point, then an exact snap onto the
// closest minimizer when within the frame tolerance; for closed curves the
// final circle is carried around the pencil of circles through the
// basepoint to the canonical center. Length is nonincreasing across the
// whole trace and the class label never changes.
HomotopyTrace reduce(const CsCurve& curve);
HomotopyTrace reduce(const SampledCurve& curve);

// The distinguished shortest curve of a class: a counterclockwise radius-r
// circle through x (Closed), the straight segment (InLens/Unrestricted), or
// the long way around the left circle, traversed clockwise (NotInLens).
CsCurve canonical_minimizer(Point2 x, Point2 y, KappaParams kappa,
                            ClassLabel label);

// Deformation from the long arc of the right circle to the long arc of the
// left circle through mirror-symmetric frames: stretch downward, retract
// the hook, swing the straight rails around, retract the landing arc.
HomotopyTrace homotope_arc_to_arc(const LensGeometry& lens, int steps = 64);

// End-to-end deformation between two curves with the same endpoints and
// class: reduce both, join the minimizers (directly, through the
// arc-to-arc deformation, or through a circle-pencil and loop-transport
// bridge for closed curves of opposite orientation), and replay the second
// reduction backwards.
HomotopyTrace build_homotopy(const CsCurve& a, const CsCurve& b);

}  // namespace kcurve
