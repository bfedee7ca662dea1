#include "holo/core.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace holo {

Dataset make_circle_dataset(int n) {
  if (n < 2) throw std::invalid_argument("make_circle_dataset: n < 2");
  Dataset d;
  d.provenance = "S_" + std::to_string(n) + " circle";
  d.samples.reserve(n);
  for (int k = 0; k < n; ++k) {
    double th = 2.0 * kPi * k / n;
    cx z(std::cos(th), std::sin(th));
    if (std::abs(z.real()) < 1e-9) continue;
    d.samples.push_back({z, sign0(z.real())});
  }
  if (d.samples.empty())
    throw std::runtime_error("make_circle_dataset: degenerate dataset");
  return d;
}

Dataset make_interval_dataset(int n) {
  if (n < 2) throw std::invalid_argument("make_interval_dataset: n < 2");
  Dataset d;
  d.provenance = "interval toy n=" + std::to_string(n);
  d.samples.reserve(n);
  for (int j = 0; j < n; ++j) {
    double x = static_cast<double>(j) / (n - 1);
    if (std::abs(x - 0.5) < 1e-9) continue;
    d.samples.push_back({cx(x, 0.0), sign0(x - 0.5)});
  }
  if (d.samples.empty())
    throw std::runtime_error("make_interval_dataset: degenerate dataset");
  return d;
}

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  // Box-Muller; u clamped away from 0 so the log is finite.
  double u = u01();
  if (u < 1e-300) u = 1e-300;
  double v = u01();
  double r = std::sqrt(-2.0 * std::log(u));
  spare_ = r * std::sin(2.0 * kPi * v);
  have_spare_ = true;
  return r * std::cos(2.0 * kPi * v);
}

double kahan_sum(const double* xs, std::size_t n) {
  double s = 0.0, c = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double y = xs[i] - c;
    double t = s + y;
    c = (t - s) - y;
    s = t;
  }
  return s;
}

cx kahan_sum(const cx* xs, std::size_t n) {
  cx s = 0.0, c = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    cx y = xs[i] - c;
    cx t = s + y;
    c = (t - s) - y;
    s = t;
  }
  return s;
}

std::string fmt_double(double x) {
  if (x == 0.0) x = 0.0;  // normalize -0
  char buf[64];
  // shortest representation that round-trips
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, x);
    if (std::strtod(buf, nullptr) == x) return buf;
  }
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::uint64_t fnv1a(const void* data, std::size_t n) {
  const unsigned char* c = static_cast<const unsigned char*>(data);
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (std::size_t i = 0; i < n; ++i) {
    h ^= c[i];
    h *= 1099511628211ull;
  }
  return h;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  fs::path tmp = p;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("short write to " + tmp.string());
  }
  fs::rename(tmp, p);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

}  // namespace holo
