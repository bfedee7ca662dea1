#pragma once
// Numerical integration on the unit disk, the unit circle, intervals and
// axis-aligned rectangles. These rules are the brute-force backbone used to
// verify analytic identities and to compute projections.
//
// Conventions: disk nodes carry the area weight (sum = pi), circle nodes the
// arclength weight (sum = 2 pi), interval/rectangle the length/area.

#include <functional>
#include <vector>

#include "holo/core.hpp"

namespace holo {

enum class QuadDomain { unit_disk, unit_circle, unit_interval, rectangle };

struct QuadratureRule {
  QuadDomain domain;
  std::vector<cx> nodes;
  std::vector<double> weights;  // positive; sum equals the domain measure
  double measure() const { return kahan_sum(weights.data(), weights.size()); }
};

// Gauss-Legendre nodes/weights on (-1,1), Newton iteration on the Legendre
// recurrence.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w);

// Tensor rule r (Gauss-Legendre, n_radial points) x theta (half-offset
// trapezoid, n_angular points). Exact for z^j conj(z)^k with j,k below the
// resolution; integrates |z|-smooth integrands spectrally in the angle.
QuadratureRule disk_rule(int n_radial = 64, int n_angular = 256);

// Half-offset equispaced angles; spectral for smooth periodic integrands.
QuadratureRule circle_rule(int n_angles = 4096);

// Piecewise Gauss-Legendre arcs split at the given jump angles. Restores
// full accuracy for integrands that are smooth between jumps (discontinuous
// boundary labelers alias at ~2k/N^2 under the equispaced rule, which is not
// enough for 1e-6 coefficient work).
QuadratureRule circle_rule_split(const std::vector<double>& jump_angles,
                                 int per_arc = 64);

QuadratureRule interval_rule(int n = 256, double a = 0.0, double b = 1.0);

QuadratureRule rect_rule(int nx, int ny, double ax, double bx, double ay,
                         double by);

cx integrate(const QuadratureRule& q, const std::function<cx(cx)>& f);
double integrate_real(const QuadratureRule& q,
                      const std::function<double(cx)>& f);

}  // namespace holo
