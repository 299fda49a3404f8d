#pragma once

#include <string>
#include <variant>

#include "kcurve/geom.hpp"
#include "kcurve/homotopy.hpp"
#include "kcurve/regions.hpp"
#include "kcurve/validate.hpp"

namespace kcurve {

// Shortest text that round-trips a double exactly (17 significant digits),
// with negative zero collapsed.
std::string format_real(double value);

// ---- canonical JSON ------------------------------------------------------
// Canonical form: object keys in alphabetical order, no insignificant
// whitespace, reals at 17 significant digits, newline-terminated. Emitting
// a parsed canonical document reproduces it byte for byte.

std::string emit_curve(const CsCurve& curve);
std::string emit_curve(const SampledCurve& curve);
std::string emit_trace(const HomotopyTrace& trace);
std::string emit_report(const ValidationReport& report);

using ParsedCurve = std::variant<CsCurve, SampledCurve>;

// Strict parsers. Broken JSON raises a syntax error; unknown, missing, or
// mistyped fields raise schema errors; well-formed documents describing
// impossible or invalid curves raise validation errors. Trace documents
// keep invalid frames (checking them is verify_trace's job), but each
// frame must still build as a curve.
ParsedCurve parse_curve(const std::string& text);
HomotopyTrace parse_trace(const std::string& text);

// ---- SVG rendering -------------------------------------------------------

struct RenderOptions {
    // Shade the lens and outer lobes of the endpoint geometry and outline
    // the two defining circles (requires 0 < d < 2r).
    bool regions = false;
    // Fraction of the bounding box added on every side.
    double margin = 0.05;
};

std::string render_svg(const CsCurve& curve, const RenderOptions& options = {});
std::string render_svg(const SampledCurve& curve,
                       const RenderOptions& options = {});
std::string render_svg(const HomotopyTrace& trace,
                       const RenderOptions& options = {});
std::string render_svg(const LensGeometry& lens,
                       const RenderOptions& options = {});

}  // namespace kcurve
