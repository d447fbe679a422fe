#pragma once

#include <string>
#include <vector>

#include "topolam/campaign.hpp"
#include "topolam/geometry.hpp"
#include "topolam/laminate.hpp"

namespace topolam {

// Self-contained SVG emission for the benchmark's standard pictures. All
// functions are pure: identical inputs produce byte-identical documents.
// Color ramp endpoints are documented in the README (blue #0000ff to red
// #ff0000 over the scale range for field maps, gray #555555 for density).

enum class RenderTarget {
  kDensity,
  kV1,
  kV3,
  kFiberR,
  kFiberL,
  kConvergence
};

RenderTarget render_target_from_string(const std::string& name);

struct RenderSpec {
  RenderTarget target = RenderTarget::kDensity;
  double scale_min = -1.0;  // field maps; V1/V3 use the fixed [-1, 1] scale
  double scale_max = 1.0;
  int glyph_stride = 3;     // draw a fiber glyph every k-th element
  std::string low_color = "#0000ff";
  std::string high_color = "#ff0000";
};

// One filled rectangle per solid element, colored by the linear two-endpoint
// ramp over [scale_min, scale_max]; void elements are omitted.
std::string render_field(const DensityField& rho,
                         const std::vector<double>& element_values,
                         const RenderSpec& spec);

// Density map: solid elements in gray.
std::string render_density(const DensityField& rho);

// Line glyph per sampled solid element, rotated by +alpha and -alpha (the
// balanced ply pair), glyph length 0.8 element units.
std::string render_fiber_field(const DensityField& rho,
                               const std::vector<FiberAngles>& angles,
                               RenderTarget side, const RenderSpec& spec);

// Mean best-so-far per (algorithm, mode) cell on a log y axis; solid strokes
// for concurrent runs, dashed for sequential, with a vertical marker at the
// sequential stage boundary.
std::string render_convergence(const std::vector<Trace>& traces,
                               const RenderSpec& spec);

}  // namespace topolam
