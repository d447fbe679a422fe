#include "topolam/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>

namespace topolam {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

struct Rgb {
  int r, g, b;
};

Rgb parse_hex(const std::string& hex) {
  if (hex.size() != 7 || hex[0] != '#') {
    throw std::invalid_argument("color must be #rrggbb: " + hex);
  }
  const int v = static_cast<int>(std::strtol(hex.c_str() + 1, nullptr, 16));
  return {(v >> 16) & 0xff, (v >> 8) & 0xff, v & 0xff};
}

std::string ramp(const RenderSpec& spec, double value) {
  const Rgb lo = parse_hex(spec.low_color);
  const Rgb hi = parse_hex(spec.high_color);
  double t = (value - spec.scale_min) / (spec.scale_max - spec.scale_min);
  t = std::clamp(t, 0.0, 1.0);
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x",
                static_cast<int>(std::lround(lo.r + t * (hi.r - lo.r))),
                static_cast<int>(std::lround(lo.g + t * (hi.g - lo.g))),
                static_cast<int>(std::lround(lo.b + t * (hi.b - lo.b))));
  return buf;
}

std::string svg_open(double width, double height) {
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width)
      << "\" height=\"" << fmt(height) << "\" viewBox=\"0 0 " << fmt(width)
      << ' ' << fmt(height) << "\">\n";
  return out.str();
}

// Field maps draw in domain coordinates with the y axis flipped (SVG y grows
// downward); 6x magnification keeps 100x50 readable.
constexpr double kScale = 6.0;

std::string element_rects(const DensityField& rho,
                          const std::vector<double>* values,
                          const RenderSpec* spec,
                          const std::string& fixed_color) {
  std::ostringstream out;
  const int nx = rho.nx();
  const int ny = rho.ny();
  const double w = kScale * 100.0 / nx;
  const double h = kScale * 50.0 / ny;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      if (!rho.solid(i, j)) continue;
      const std::string color =
          values != nullptr
              ? ramp(*spec, (*values)[static_cast<std::size_t>(j * nx + i)])
              : fixed_color;
      out << "<rect x=\"" << fmt(i * w) << "\" y=\""
          << fmt((ny - 1 - j) * h) << "\" width=\"" << fmt(w)
          << "\" height=\"" << fmt(h) << "\" fill=\"" << color << "\"/>\n";
    }
  }
  return out.str();
}

}  // namespace

RenderTarget render_target_from_string(const std::string& name) {
  if (name == "density") return RenderTarget::kDensity;
  if (name == "v1") return RenderTarget::kV1;
  if (name == "v3") return RenderTarget::kV3;
  if (name == "fiber_r") return RenderTarget::kFiberR;
  if (name == "fiber_l") return RenderTarget::kFiberL;
  if (name == "convergence") return RenderTarget::kConvergence;
  throw std::invalid_argument("unknown render target: " + name);
}

std::string render_field(const DensityField& rho,
                         const std::vector<double>& element_values,
                         const RenderSpec& spec) {
  if (element_values.size() !=
      static_cast<std::size_t>(rho.nx() * rho.ny())) {
    throw std::invalid_argument("render_field: value grid size mismatch");
  }
  if (!(spec.scale_min < spec.scale_max)) {
    throw std::invalid_argument("render_field: scale_min < scale_max");
  }
  std::string out = svg_open(kScale * 100.0, kScale * 50.0);
  out += element_rects(rho, &element_values, &spec, "");
  out += "</svg>\n";
  return out;
}

std::string render_density(const DensityField& rho) {
  std::string out = svg_open(kScale * 100.0, kScale * 50.0);
  out += element_rects(rho, nullptr, nullptr, "#555555");
  out += "</svg>\n";
  return out;
}

std::string render_fiber_field(const DensityField& rho,
                               const std::vector<FiberAngles>& angles,
                               RenderTarget side, const RenderSpec& spec) {
  if (side != RenderTarget::kFiberR && side != RenderTarget::kFiberL) {
    throw std::invalid_argument("render_fiber_field: side must be fiber_r/l");
  }
  if (angles.size() != static_cast<std::size_t>(rho.nx() * rho.ny())) {
    throw std::invalid_argument("render_fiber_field: angle grid mismatch");
  }
  const int stride = std::max(1, spec.glyph_stride);
  const int nx = rho.nx();
  const int ny = rho.ny();
  const double w = kScale * 100.0 / nx;
  const double h = kScale * 50.0 / ny;
  const double half = 0.4 * w;  // glyph length 0.8 element units

  std::string out = svg_open(kScale * 100.0, kScale * 50.0);
  std::ostringstream body;
  for (int j = 0; j < ny; j += stride) {
    for (int i = 0; i < nx; i += stride) {
      if (!rho.solid(i, j)) continue;
      const FiberAngles& fa = angles[static_cast<std::size_t>(j * nx + i)];
      const double alpha =
          side == RenderTarget::kFiberR ? fa.alpha_r : fa.alpha_l;
      const double cx = (i + 0.5) * w;
      const double cy = (ny - 1 - j + 0.5) * h;
      // +alpha and -alpha of the balanced pair; SVG y points down, so the
      // +alpha line uses -sin.
      for (const double sign : {1.0, -1.0}) {
        const double dx = half * std::cos(sign * alpha);
        const double dy = -half * std::sin(sign * alpha);
        body << "<line x1=\"" << fmt(cx - dx) << "\" y1=\"" << fmt(cy - dy)
             << "\" x2=\"" << fmt(cx + dx) << "\" y2=\"" << fmt(cy + dy)
             << "\" stroke=\"#222222\" stroke-width=\"0.8\"/>\n";
      }
    }
  }
  out += body.str();
  out += "</svg>\n";
  return out;
}

std::string render_convergence(const std::vector<Trace>& traces,
                               const RenderSpec&) {
  if (traces.empty()) {
    throw std::invalid_argument("render_convergence: no traces");
  }
  // Mean best-so-far per (algorithm, mode) cell, plus the stage boundary of
  // any sequential trace.
  const CampaignSummary summary = aggregate(traces);
  int stage_boundary = -1;
  for (const Trace& t : traces) {
    for (std::size_t k = 0; k < t.rows.size(); ++k) {
      if (t.rows[k].stage == 2) {
        stage_boundary = static_cast<int>(k);
        break;
      }
    }
    if (stage_boundary >= 0) break;
  }

  double y_min = std::numeric_limits<double>::infinity();
  double y_max = 0.0;
  std::size_t x_max = 1;
  for (const CellSummary& c : summary.cells) {
    for (double v : c.mean_best_curve) {
      if (v > 0.0) {
        y_min = std::min(y_min, v);
        y_max = std::max(y_max, v);
      }
    }
    x_max = std::max(x_max, c.mean_best_curve.size());
  }
  if (!std::isfinite(y_min) || y_max <= 0.0) {
    y_min = 1e-3;
    y_max = 1.0;
  }
  if (y_min == y_max) {
    y_min /= 2.0;
    y_max *= 2.0;
  }
  const double log_lo = std::floor(std::log10(y_min));
  const double log_hi = std::ceil(std::log10(y_max));

  const double width = 640.0, height = 420.0;
  const double ml = 70.0, mr = 20.0, mt = 20.0, mb = 50.0;
  const double pw = width - ml - mr;
  const double ph = height - mt - mb;
  auto x_of = [&](double eval) {
    return ml + pw * eval / static_cast<double>(x_max - 1);
  };
  auto y_of = [&](double v) {
    const double t =
        (std::log10(v) - log_lo) / std::max(log_hi - log_lo, 1e-12);
    return mt + ph * (1.0 - t);
  };

  static const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                   "#9467bd", "#ff7f0e", "#8c564b"};
  std::map<std::string, int> algo_color;
  for (const CellSummary& c : summary.cells) {
    if (algo_color.find(c.algorithm) == algo_color.end()) {
      const int idx = static_cast<int>(algo_color.size());
      algo_color[c.algorithm] = idx % 6;
    }
  }

  std::string out = svg_open(width, height);
  std::ostringstream body;
  // Axes.
  body << "<rect x=\"" << fmt(ml) << "\" y=\"" << fmt(mt) << "\" width=\""
       << fmt(pw) << "\" height=\"" << fmt(ph)
       << "\" fill=\"none\" stroke=\"#000000\" stroke-width=\"1\"/>\n";
  // Log-decade ticks.
  for (double e = log_lo; e <= log_hi + 0.5; e += 1.0) {
    const double y = y_of(std::pow(10.0, e));
    body << "<line x1=\"" << fmt(ml - 4.0) << "\" y1=\"" << fmt(y)
         << "\" x2=\"" << fmt(ml) << "\" y2=\"" << fmt(y)
         << "\" stroke=\"#000000\" stroke-width=\"1\"/>\n"
         << "<text x=\"" << fmt(ml - 8.0) << "\" y=\"" << fmt(y + 4.0)
         << "\" text-anchor=\"end\" font-size=\"12\">1e" <<
        static_cast<int>(e) << "</text>\n";
  }
  // A few x ticks.
  for (int k = 0; k <= 4; ++k) {
    const double eval = (x_max - 1) * k / 4.0;
    body << "<line x1=\"" << fmt(x_of(eval)) << "\" y1=\"" << fmt(mt + ph)
         << "\" x2=\"" << fmt(x_of(eval)) << "\" y2=\""
         << fmt(mt + ph + 4.0)
         << "\" stroke=\"#000000\" stroke-width=\"1\"/>\n"
         << "<text x=\"" << fmt(x_of(eval)) << "\" y=\""
         << fmt(mt + ph + 18.0)
         << "\" text-anchor=\"middle\" font-size=\"12\">"
         << static_cast<long long>(std::llround(eval)) << "</text>\n";
  }
  body << "<text x=\"" << fmt(ml + pw / 2.0) << "\" y=\""
       << fmt(height - 12.0)
       << "\" text-anchor=\"middle\" font-size=\"13\">evaluations</text>\n";

  // Stage boundary marker.
  if (stage_boundary >= 0) {
    body << "<line x1=\"" << fmt(x_of(stage_boundary)) << "\" y1=\""
         << fmt(mt) << "\" x2=\"" << fmt(x_of(stage_boundary)) << "\" y2=\""
         << fmt(mt + ph)
         << "\" stroke=\"#666666\" stroke-width=\"1\" "
            "stroke-dasharray=\"2,3\"/>\n";
  }

  // Curves.
  double legend_y = mt + 14.0;
  for (const CellSummary& c : summary.cells) {
    const char* color = kPalette[algo_color[c.algorithm]];
    const bool dashed = c.mode == "sequential";
    std::ostringstream path;
    for (std::size_t k = 0; k < c.mean_best_curve.size(); ++k) {
      const double v = std::max(c.mean_best_curve[k], 1e-300);
      path << (k == 0 ? 'M' : 'L') << fmt(x_of(static_cast<double>(k)))
           << ' ' << fmt(y_of(std::clamp(
                       v, std::pow(10.0, log_lo), std::pow(10.0, log_hi))));
    }
    body << "<path d=\"" << path.str() << "\" fill=\"none\" stroke=\""
         << color << "\" stroke-width=\"1.5\""
         << (dashed ? " stroke-dasharray=\"6,4\"" : "") << "/>\n";
    // Legend entry.
    body << "<line x1=\"" << fmt(ml + pw - 150.0) << "\" y1=\""
         << fmt(legend_y - 4.0) << "\" x2=\"" << fmt(ml + pw - 120.0)
         << "\" y2=\"" << fmt(legend_y - 4.0) << "\" stroke=\"" << color
         << "\" stroke-width=\"1.5\""
         << (dashed ? " stroke-dasharray=\"6,4\"" : "") << "/>\n"
         << "<text x=\"" << fmt(ml + pw - 114.0) << "\" y=\""
         << fmt(legend_y) << "\" font-size=\"11\">" << c.algorithm << ' '
         << c.mode << "</text>\n";
    legend_y += 16.0;
  }
  out += body.str();
  out += "</svg>\n";
  return out;
}

}  // namespace topolam
