#include "holo/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace holo {

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n < 1");
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Chebyshev-like initial guess for the i-th root.
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0.0, dz;
    do {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        double p3 = p2;
        p2 = p1;
        p1 = ((2 * j - 1) * z * p2 - (j - 1) * p3) / j;
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      dz = -p1 / pp;
      z += dz;
    } while (std::abs(dz) > 4 * std::numeric_limits<double>::epsilon());
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
  }
}

QuadratureRule disk_rule(int n_radial, int n_angular) {
  if (n_radial < 1 || n_angular < 4)
    throw std::invalid_argument("disk_rule: orders too small");
  std::vector<double> gx, gw;
  gauss_legendre(n_radial, gx, gw);
  QuadratureRule q;
  q.domain = QuadDomain::unit_disk;
  q.nodes.reserve(static_cast<std::size_t>(n_radial) * n_angular);
  q.weights.reserve(q.nodes.capacity());
  double dth = 2.0 * kPi / n_angular;
  for (int i = 0; i < n_radial; ++i) {
    double r = 0.5 * (gx[i] + 1.0);
    double wr = 0.5 * gw[i] * r;  // area element r dr
    for (int j = 0; j < n_angular; ++j) {
      double th = dth * (j + 0.5);
      q.nodes.emplace_back(r * std::cos(th), r * std::sin(th));
      q.weights.push_back(wr * dth);
    }
  }
  return q;
}

QuadratureRule circle_rule(int n_angles) {
  if (n_angles < 64) throw std::invalid_argument("circle_rule: n < 64");
  QuadratureRule q;
  q.domain = QuadDomain::unit_circle;
  double dth = 2.0 * kPi / n_angles;
  for (int j = 0; j < n_angles; ++j) {
    double th = dth * (j + 0.5);
    q.nodes.emplace_back(std::cos(th), std::sin(th));
    q.weights.push_back(dth);
  }
  return q;
}

QuadratureRule circle_rule_split(const std::vector<double>& jump_angles,
                                 int per_arc) {
  if (jump_angles.empty())
    throw std::invalid_argument("circle_rule_split: no jump angles");
  std::vector<double> cuts(jump_angles);
  for (double& a : cuts) {
    a = std::fmod(a, 2.0 * kPi);
    if (a < 0) a += 2.0 * kPi;
  }
  std::sort(cuts.begin(), cuts.end());
  std::vector<double> gx, gw;
  gauss_legendre(per_arc, gx, gw);
  QuadratureRule q;
  q.domain = QuadDomain::unit_circle;
  for (std::size_t s = 0; s < cuts.size(); ++s) {
    double a = cuts[s];
    double b = (s + 1 < cuts.size()) ? cuts[s + 1] : cuts[0] + 2.0 * kPi;
    if (b - a < 1e-14) continue;
    for (int i = 0; i < per_arc; ++i) {
      double th = 0.5 * (b - a) * gx[i] + 0.5 * (a + b);
      q.nodes.emplace_back(std::cos(th), std::sin(th));
      q.weights.push_back(0.5 * (b - a) * gw[i]);
    }
  }
  return q;
}

QuadratureRule interval_rule(int n, double a, double b) {
  if (n < 1 || !(b > a)) throw std::invalid_argument("interval_rule");
  std::vector<double> gx, gw;
  gauss_legendre(n, gx, gw);
  QuadratureRule q;
  q.domain = QuadDomain::unit_interval;
  for (int i = 0; i < n; ++i) {
    q.nodes.emplace_back(0.5 * (b - a) * gx[i] + 0.5 * (a + b), 0.0);
    q.weights.push_back(0.5 * (b - a) * gw[i]);
  }
  return q;
}

QuadratureRule rect_rule(int nx, int ny, double ax, double bx, double ay,
                         double by) {
  if (nx < 1 || ny < 1 || !(bx > ax) || !(by > ay))
    throw std::invalid_argument("rect_rule");
  std::vector<double> gx, gwx, gy, gwy;
  gauss_legendre(nx, gx, gwx);
  gauss_legendre(ny, gy, gwy);
  QuadratureRule q;
  q.domain = QuadDomain::rectangle;
  for (int i = 0; i < nx; ++i) {
    double x = 0.5 * (bx - ax) * gx[i] + 0.5 * (ax + bx);
    double wx = 0.5 * (bx - ax) * gwx[i];
    for (int j = 0; j < ny; ++j) {
      double y = 0.5 * (by - ay) * gy[j] + 0.5 * (ay + by);
      q.nodes.emplace_back(x, y);
      q.weights.push_back(wx * 0.5 * (by - ay) * gwy[j]);
    }
  }
  return q;
}

cx integrate(const QuadratureRule& q, const std::function<cx(cx)>& f) {
  cx s = 0.0, c = 0.0;
  for (std::size_t i = 0; i < q.nodes.size(); ++i) {
    cx y = f(q.nodes[i]) * q.weights[i] - c;
    cx t = s + y;
    c = (t - s) - y;
    s = t;
  }
  return s;
}

double integrate_real(const QuadratureRule& q,
                      const std::function<double(cx)>& f) {
  double s = 0.0, c = 0.0;
  for (std::size_t i = 0; i < q.nodes.size(); ++i) {
    double y = f(q.nodes[i]) * q.weights[i] - c;
    double t = s + y;
    c = (t - s) - y;
    s = t;
  }
  return s;
}

}  // namespace holo
