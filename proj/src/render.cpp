#include "holo/render.hpp"

#include <zlib.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <sstream>
#include <stdexcept>

namespace holo {

Canvas::Canvas(int w, int h, unsigned char r, unsigned char g, unsigned char b,
               unsigned char a)
    : width(w), height(h), rgba(static_cast<std::size_t>(w) * h * 4) {
  if (w <= 0 || h <= 0) throw std::invalid_argument("canvas: empty");
  for (std::size_t i = 0; i < rgba.size(); i += 4) {
    rgba[i] = r;
    rgba[i + 1] = g;
    rgba[i + 2] = b;
    rgba[i + 3] = a;
  }
}

void Canvas::set(int x, int y, unsigned char r, unsigned char g,
                 unsigned char b, unsigned char a) {
  if (x < 0 || y < 0 || x >= width || y >= height) return;
  std::size_t i = 4 * (static_cast<std::size_t>(y) * width + x);
  rgba[i] = r;
  rgba[i + 1] = g;
  rgba[i + 2] = b;
  rgba[i + 3] = a;
}

const unsigned char* Canvas::at(int x, int y) const {
  return rgba.data() + 4 * (static_cast<std::size_t>(y) * width + x);
}

void Canvas::line(int x0, int y0, int x1, int y1, unsigned char r,
                  unsigned char g, unsigned char b) {
  int dx = std::abs(x1 - x0), dy = -std::abs(y1 - y0);
  int sx = x0 < x1 ? 1 : -1, sy = y0 < y1 ? 1 : -1;
  int err = dx + dy;
  for (;;) {
    set(x0, y0, r, g, b);
    if (x0 == x1 && y0 == y1) break;
    int e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      x0 += sx;
    }
    if (e2 <= dx) {
      err += dx;
      y0 += sy;
    }
  }
}

namespace {

void be32(std::string& s, std::uint32_t v) {
  s.push_back(static_cast<char>((v >> 24) & 0xff));
  s.push_back(static_cast<char>((v >> 16) & 0xff));
  s.push_back(static_cast<char>((v >> 8) & 0xff));
  s.push_back(static_cast<char>(v & 0xff));
}

void chunk(std::string& out, const char type[4], const std::string& data) {
  be32(out, static_cast<std::uint32_t>(data.size()));
  std::string td(type, 4);
  td += data;
  out += td;
  std::uint32_t crc = crc32(0L, Z_NULL, 0);
  crc = crc32(crc, reinterpret_cast<const Bytef*>(td.data()),
              static_cast<uInt>(td.size()));
  be32(out, crc);
}

}  // namespace

std::string encode_png(const Canvas& c) {
  if (c.width <= 0 || c.height <= 0) throw std::invalid_argument("png: empty canvas");
  // raw scanlines, filter byte 0 per row
  std::string raw;
  raw.reserve(static_cast<std::size_t>(c.height) * (1 + 4 * c.width));
  for (int y = 0; y < c.height; ++y) {
    raw.push_back('\0');
    raw.append(reinterpret_cast<const char*>(c.at(0, y)),
               static_cast<std::size_t>(4) * c.width);
  }
  uLongf bound = compressBound(static_cast<uLong>(raw.size()));
  std::string z(bound, '\0');
  if (compress2(reinterpret_cast<Bytef*>(z.data()), &bound,
                reinterpret_cast<const Bytef*>(raw.data()),
                static_cast<uLong>(raw.size()), 6) != Z_OK)
    throw std::runtime_error("png: deflate failed");
  z.resize(bound);

  std::string out("\x89PNG\r\n\x1a\n", 8);
  std::string ihdr;
  be32(ihdr, static_cast<std::uint32_t>(c.width));
  be32(ihdr, static_cast<std::uint32_t>(c.height));
  ihdr.push_back(8);   // bit depth
  ihdr.push_back(6);   // RGBA
  ihdr.push_back(0);   // compression
  ihdr.push_back(0);   // filter
  ihdr.push_back(0);   // no interlace
  chunk(out, "IHDR", ihdr);
  chunk(out, "IDAT", z);
  chunk(out, "IEND", "");
  return out;
}

void write_png(const std::string& path, const Canvas& c) {
  write_file_atomic(path, encode_png(c));
}

void hsv_to_rgb(double h, double s, double v, unsigned char& r,
                unsigned char& g, unsigned char& b) {
  h = h - std::floor(h);
  s = std::clamp(s, 0.0, 1.0);
  v = std::clamp(v, 0.0, 1.0);
  double hf = h * 6.0;
  int i = static_cast<int>(hf) % 6;
  double f = hf - std::floor(hf);
  double p = v * (1.0 - s), q = v * (1.0 - s * f), t = v * (1.0 - s * (1.0 - f));
  double rr = 0, gg = 0, bb = 0;
  switch (i) {
    case 0: rr = v; gg = t; bb = p; break;
    case 1: rr = q; gg = v; bb = p; break;
    case 2: rr = p; gg = v; bb = t; break;
    case 3: rr = p; gg = q; bb = v; break;
    case 4: rr = t; gg = p; bb = v; break;
    default: rr = v; gg = p; bb = q; break;
  }
  r = static_cast<unsigned char>(std::lround(rr * 255.0));
  g = static_cast<unsigned char>(std::lround(gg * 255.0));
  b = static_cast<unsigned char>(std::lround(bb * 255.0));
}

void RenderConfig::validate() const {
  if (size < 64) throw std::invalid_argument("render: size < 64");
  for (double l : re_levels)
    if (!std::isfinite(l)) throw std::invalid_argument("render: bad Re level");
  for (double l : im_levels)
    if (!std::isfinite(l)) throw std::invalid_argument("render: bad Im level");
}

std::vector<std::array<double, 4>> marching_squares(
    const std::vector<double>& field, int width, int height, double level) {
  if (static_cast<int>(field.size()) != width * height)
    throw std::invalid_argument("marching_squares: field size");
  std::vector<std::array<double, 4>> segs;
  auto F = [&](int x, int y) { return field[static_cast<std::size_t>(y) * width + x]; };
  auto lerp = [level](double a, double b) {
    double d = b - a;
    if (d == 0.0) return 0.5;
    return std::clamp((level - a) / d, 0.0, 1.0);
  };
  for (int y = 0; y + 1 < height; ++y) {
    for (int x = 0; x + 1 < width; ++x) {
      double v00 = F(x, y), v10 = F(x + 1, y);
      double v01 = F(x, y + 1), v11 = F(x + 1, y + 1);
      if (!std::isfinite(v00) || !std::isfinite(v10) || !std::isfinite(v01) ||
          !std::isfinite(v11))
        continue;
      int c = (v00 > level) | ((v10 > level) << 1) | ((v11 > level) << 2) |
              ((v01 > level) << 3);
      if (c == 0 || c == 15) continue;
      // edge intersection points (pixel coordinates)
      std::array<double, 2> top = {x + lerp(v00, v10), static_cast<double>(y)};
      std::array<double, 2> bottom = {x + lerp(v01, v11), static_cast<double>(y + 1)};
      std::array<double, 2> left = {static_cast<double>(x), y + lerp(v00, v01)};
      std::array<double, 2> right = {static_cast<double>(x + 1), y + lerp(v10, v11)};
      auto add = [&segs](const std::array<double, 2>& a,
                         const std::array<double, 2>& b) {
        segs.push_back({a[0], a[1], b[0], b[1]});
      };
      switch (c) {
        case 1: case 14: add(top, left); break;
        case 2: case 13: add(top, right); break;
        case 3: case 12: add(left, right); break;
        case 4: case 11: add(right, bottom); break;
        case 6: case 9: add(top, bottom); break;
        case 7: case 8: add(left, bottom); break;
        case 5:
        case 10: {
          double mid = 0.25 * (v00 + v10 + v01 + v11);
          bool join = (mid > level) == (c == 5);
          if (join) {
            add(top, right);
            add(left, bottom);
          } else {
            add(top, left);
            add(right, bottom);
          }
          break;
        }
        default: break;
      }
    }
  }
  return segs;
}

DomainColoring render_domain_coloring(const Hypothesis& h, const RenderConfig& cfg) {
  cfg.validate();
  if (h.features->domain() != FeatureDomain::unit_disk)
    throw std::invalid_argument("domain coloring: disk hypotheses only");
  const int S = cfg.size;
  DomainColoring out{Canvas(S, S, 255, 255, 255, 0), 0};
  std::vector<double> re(static_cast<std::size_t>(S) * S),
      im(static_cast<std::size_t>(S) * S), inside(static_cast<std::size_t>(S) * S);
  for (int py = 0; py < S; ++py) {
    for (int px = 0; px < S; ++px) {
      double x = -1.0 + 2.0 * (px + 0.5) / S;
      double y = 1.0 - 2.0 * (py + 0.5) / S;
      std::size_t idx = static_cast<std::size_t>(py) * S + px;
      cx f = h(cx(x, y));
      re[idx] = f.real();
      im[idx] = f.imag();
      inside[idx] = std::hypot(x, y) <= 1.0 ? 1.0 : 0.0;
      if (inside[idx] == 0.0) continue;
      if (!std::isfinite(f.real()) || !std::isfinite(f.imag())) {
        out.image.set(px, py, 0, 0, 0);
        ++out.non_finite_pixels;
        continue;
      }
      double hue = std::arg(f) / (2.0 * kPi);
      if (hue < 0.0) hue += 1.0;
      double m = std::abs(f);
      if (cfg.log_magnitude) m = std::log1p(m);
      double compressed = m / (1.0 + m);
      unsigned char r, g, b;
      if (cfg.value_mapping)
        hsv_to_rgb(hue, 1.0, compressed, r, g, b);
      else
        hsv_to_rgb(hue, compressed, 1.0, r, g, b);
      out.image.set(px, py, r, g, b);
    }
  }
  auto draw = [&](const std::vector<double>& field, double level, unsigned char v) {
    for (const auto& s : marching_squares(field, S, S, level)) {
      int x0 = static_cast<int>(std::lround(s[0])), y0 = static_cast<int>(std::lround(s[1]));
      int x1 = static_cast<int>(std::lround(s[2])), y1 = static_cast<int>(std::lround(s[3]));
      auto in = [&](int x, int y) {
        if (x < 0 || y < 0 || x >= S || y >= S) return false;
        return inside[static_cast<std::size_t>(y) * S + x] > 0.0;
      };
      if (in(x0, y0) && in(x1, y1)) out.image.line(x0, y0, x1, y1, v, v, v);
    }
  };
  for (double l : cfg.re_levels) draw(re, l, 255);
  for (double l : cfg.im_levels) draw(im, l, 0);
  return out;
}

CurveData circle_profile_data(const Hypothesis& h, int n_angles) {
  if (n_angles < 64) throw std::invalid_argument("circle profile: n_angles < 64");
  CurveData c;
  c.theta.resize(n_angles);
  c.values.resize(n_angles);
  for (int i = 0; i < n_angles; ++i) {
    c.theta[i] = 2.0 * kPi * (i + 0.5) / n_angles;
    c.values[i] = h(std::polar(1.0, c.theta[i]));
  }
  return c;
}

std::string curve_to_csv(const CurveData& c) {
  std::ostringstream os;
  os << "theta,re,im\n";
  for (std::size_t i = 0; i < c.theta.size(); ++i)
    os << fmt_double(c.theta[i]) << ',' << fmt_double(c.values[i].real()) << ','
       << fmt_double(c.values[i].imag()) << '\n';
  return os.str();
}

namespace {

struct Mapper {  // world rectangle -> pixel rectangle, y up
  double ax, bx, ay, by;
  int px0, py0, px1, py1;  // pixel corners (py0 top)
  int x(double wx) const {
    return px0 + static_cast<int>(std::lround((wx - ax) / (bx - ax) * (px1 - px0)));
  }
  int y(double wy) const {
    return py1 - static_cast<int>(std::lround((wy - ay) / (by - ay) * (py1 - py0)));
  }
};

}  // namespace

Canvas render_circle_profiles(const CurveData& c, int width, int height,
                               const std::vector<LabeledSample>& marks) {
  if (c.theta.size() < 2) throw std::invalid_argument("profiles: too few samples");
  Canvas cv(width, height);
  double lo = 0.0, hi = 0.0;
  for (cx v : c.values) {
    lo = std::min({lo, v.real(), v.imag()});
    hi = std::max({hi, v.real(), v.imag()});
  }
  double pad = 0.05 * std::max(hi - lo, 1e-6);
  Mapper m{c.theta.front(), c.theta.back(), lo - pad, hi + pad, 50, 10,
           width - 10, height - 30};
  // frame and zero line
  cv.line(m.px0, m.py0, m.px0, m.py1, 120, 120, 120);
  cv.line(m.px0, m.py1, m.px1, m.py1, 120, 120, 120);
  if (lo < 0.0 && hi > 0.0)
    cv.line(m.px0, m.y(0.0), m.px1, m.y(0.0), 200, 200, 200);
  const int n = static_cast<int>(c.theta.size());
  for (int i = 0; i + 1 < n; ++i) {
    cv.line(m.x(c.theta[i]), m.y(c.values[i].real()), m.x(c.theta[i + 1]),
            m.y(c.values[i + 1].real()), 31, 119, 180);
    cv.line(m.x(c.theta[i]), m.y(c.values[i].imag()), m.x(c.theta[i + 1]),
            m.y(c.values[i + 1].imag()), 255, 127, 14);
  }
  // mark sign changes of Re
  int pairs = c.cyclic ? n : n - 1;
  for (int i = 0; i < pairs; ++i) {
    int j = (i + 1) % n;
    double a = c.values[i].real(), b = c.values[j].real();
    if (a == 0.0 || a * b >= 0.0) continue;
    double span = c.theta[j] - c.theta[i] + (j == 0 ? 2.0 * kPi : 0.0);
    double tc = c.theta[i] + span * (a / (a - b));
    if (j == 0) tc = std::fmod(tc, 2.0 * kPi);
    int px = m.x(tc), py = m.y(0.0);
    for (int dy = -2; dy <= 2; ++dy)
      for (int dx = -2; dx <= 2; ++dx) cv.set(px + dx, py + dy, 214, 39, 40);
  }
  for (const auto& s : marks) {
    int px = m.x(s.z.real()), py = m.y(0.0);
    unsigned char r = s.t > 0 ? 44 : 148, g = s.t > 0 ? 160 : 103,
                  b = s.t > 0 ? 44 : 189;
    for (int dy = -2; dy <= 2; ++dy)
      for (int dx = -2; dx <= 2; ++dx)
        if (std::abs(dx) + std::abs(dy) <= 2) cv.set(px + dx, py + dy, r, g, b);
  }
  return cv;
}

RangeCurve range_curve(const Hypothesis& h, int n_angles) {
  RangeCurve rc;
  rc.data = circle_profile_data(h, n_angles);
  const int n = n_angles;
  double len = 0.0;
  int last_sign = 0, first_sign = 0, changes = 0;
  for (int i = 0; i < n; ++i) {
    len += std::abs(rc.data.values[(i + 1) % n] - rc.data.values[i]);
    double u = rc.data.values[i].real();
    int s = u > 0.0 ? 1 : (u < 0.0 ? -1 : 0);
    if (s != 0) {
      if (last_sign != 0 && s != last_sign) ++changes;
      if (first_sign == 0) first_sign = s;
      last_sign = s;
    }
  }
  if (last_sign != 0 && first_sign != 0 && last_sign != first_sign) ++changes;
  rc.length = len;
  rc.axis_crossings = changes;
  return rc;
}

Canvas render_range_curve(const RangeCurve& rc, int size) {
  Canvas cv(size, size);
  double lo_x = 0.0, hi_x = 0.0, lo_y = 0.0, hi_y = 0.0;
  for (cx v : rc.data.values) {
    lo_x = std::min(lo_x, v.real());
    hi_x = std::max(hi_x, v.real());
    lo_y = std::min(lo_y, v.imag());
    hi_y = std::max(hi_y, v.imag());
  }
  double cx0 = 0.5 * (lo_x + hi_x), cy0 = 0.5 * (lo_y + hi_y);
  double half = 0.55 * std::max({hi_x - lo_x, hi_y - lo_y, 1e-6});
  Mapper m{cx0 - half, cx0 + half, cy0 - half, cy0 + half, 10, 10, size - 10,
           size - 10};
  // axes: imaginary axis is the decision boundary
  if (m.ax < 0.0 && m.bx > 0.0)
    cv.line(m.x(0.0), m.py0, m.x(0.0), m.py1, 214, 39, 40);
  if (m.ay < 0.0 && m.by > 0.0)
    cv.line(m.px0, m.y(0.0), m.px1, m.y(0.0), 200, 200, 200);
  const int n = static_cast<int>(rc.data.values.size());
  for (int i = 0; i < n; ++i) {
    cx a = rc.data.values[i], b = rc.data.values[(i + 1) % n];
    cv.line(m.x(a.real()), m.y(a.imag()), m.x(b.real()), m.y(b.imag()), 31, 60, 120);
  }
  return cv;
}

Canvas render_heatmap(const GridField& g, int max_size) {
  g.validate();
  int scale = std::max(1, max_size / std::max(g.nx, g.ny));
  Canvas cv(g.nx * scale, g.ny * scale);
  double lo = g.values.minCoeff(), hi = g.values.maxCoeff();
  double span = hi - lo;
  static const std::array<std::array<double, 3>, 5> stops = {{
      {68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}}};
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j) {
      double t = span > 0.0 ? (g.values(i, j) - lo) / span : 0.5;
      double f = t * 4.0;
      int s0 = std::min(3, static_cast<int>(f));
      double u = f - s0;
      unsigned char r = static_cast<unsigned char>(
          std::lround(stops[s0][0] + u * (stops[s0 + 1][0] - stops[s0][0])));
      unsigned char gg = static_cast<unsigned char>(
          std::lround(stops[s0][1] + u * (stops[s0 + 1][1] - stops[s0][1])));
      unsigned char b = static_cast<unsigned char>(
          std::lround(stops[s0][2] + u * (stops[s0 + 1][2] - stops[s0][2])));
      for (int dy = 0; dy < scale; ++dy)
        for (int dx = 0; dx < scale; ++dx)
          cv.set(i * scale + dx, (g.ny - 1 - j) * scale + dy, r, gg, b);
    }
  return cv;
}

}  // namespace holo
