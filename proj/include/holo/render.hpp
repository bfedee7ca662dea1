#pragma once
// Visualization: domain coloring of disk hypotheses, circle profiles, range
// curves, and grid heatmaps, written as reproducible PNGs (no ancillary
// chunks, fixed zlib settings) and CSV curve data.

#include <array>
#include <string>
#include <vector>

#include "holo/core.hpp"
#include "holo/features.hpp"
#include "holo/pde.hpp"

namespace holo {

struct Canvas {
  int width = 0, height = 0;
  std::vector<unsigned char> rgba;  // row-major, 4 bytes per pixel

  Canvas() = default;
  Canvas(int w, int h, unsigned char r = 255, unsigned char g = 255,
         unsigned char b = 255, unsigned char a = 255);
  void set(int x, int y, unsigned char r, unsigned char g, unsigned char b,
           unsigned char a = 255);
  const unsigned char* at(int x, int y) const;
  void line(int x0, int y0, int x1, int y1, unsigned char r, unsigned char g,
            unsigned char b);  // Bresenham, clipped
};

// Minimal PNG stream: IHDR + single IDAT (zlib level 6, filter 0) + IEND.
std::string encode_png(const Canvas& c);
void write_png(const std::string& path, const Canvas& c);

// h in [0,1) mapped around the color wheel; s, v in [0,1].
void hsv_to_rgb(double h, double s, double v, unsigned char& r,
                unsigned char& g, unsigned char& b);

struct RenderConfig {
  int size = 512;
  std::vector<double> re_levels = {0.0};  // contoured in white
  std::vector<double> im_levels = {0.0};  // contoured in black
  bool log_magnitude = false;  // ln(1+m) before compression, for branch points
  bool value_mapping = false;  // magnitude drives HSV value instead of saturation
  void validate() const;
};

struct DomainColoring {
  Canvas image;
  int non_finite_pixels = 0;  // rendered black
};

// hue = arg(f)/2pi, saturation = m/(1+m) with m = |f|; pixels outside the
// closed disk are transparent; Re/Im level sets overlaid by marching squares.
DomainColoring render_domain_coloring(const Hypothesis& h, const RenderConfig& cfg);

// Level-curve segments of a scalar field sampled at pixel centers; endpoints
// in pixel coordinates (x0,y0,x1,y1).
std::vector<std::array<double, 4>> marching_squares(
    const std::vector<double>& field, int width, int height, double level);

struct CurveData {
  std::vector<double> theta;  // parameter (angle, or abscissa for intervals)
  std::vector<cx> values;
  bool cyclic = true;  // whether the last sample connects back to the first
};

CurveData circle_profile_data(const Hypothesis& h, int n_angles);
std::string curve_to_csv(const CurveData& c);  // theta, re, im
// Re (blue) and Im (orange) against theta; zero line and Re-crossings marked.
// marks places labeled sample points on the zero line (green +1 / purple -1).
Canvas render_circle_profiles(const CurveData& c, int width = 640,
                              int height = 400,
                              const std::vector<LabeledSample>& marks = {});

struct RangeCurve {
  CurveData data;
  double length = 0.0;    // polygonal length of the closed image curve
  int axis_crossings = 0; // crossings of the imaginary axis
};

RangeCurve range_curve(const Hypothesis& h, int n_angles);
// Image of the unit circle in the range plane with the imaginary axis
// (decision boundary) overlaid.
Canvas render_range_curve(const RangeCurve& rc, int size = 512);

// Linear color map over the field's min..max range (small viridis ramp).
Canvas render_heatmap(const GridField& g, int max_size = 512);

}  // namespace holo
