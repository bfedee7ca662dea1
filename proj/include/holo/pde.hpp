#pragma once
// Newtonian-potential representation of the robust hypothesis parameter
// function h and the Laplace identities behind harmonic activations.
//
// h(w) = sum_n lambda_n t_n Int Phi(w - v) s(x_n; v) dV(v) is built on a
// uniform grid by convolution against the sampled fundamental solution, with
// the singular cell integrated in closed form; -Lap h then reproduces the
// weighted activation sum, which a 5-point stencil verifies.

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "holo/core.hpp"

namespace holo {

struct GridField {
  double ax = 0, bx = 0, ay = 0, by = 0;  // rectangle bounds
  int nx = 0, ny = 0;                     // nodes per axis, >= 3
  Eigen::MatrixXd values;                 // (nx, ny), node (i,j) = (x_i, y_j)

  double hx() const { return (bx - ax) / (nx - 1); }
  double hy() const { return (by - ay) / (ny - 1); }
  double x(int i) const { return ax + i * hx(); }
  double y(int j) const { return ay + j * hy(); }
  void validate() const;  // throws std::invalid_argument
};

GridField make_grid(double ax, double bx, double ay, double by, int nx, int ny);
// fills values from a callable of (x, y)
GridField sample_grid(double ax, double bx, double ay, double by, int nx, int ny,
                      const std::function<double(double, double)>& f);
std::string grid_to_csv(const GridField& g);

// -(1/2pi) ln|w|; -Lap Phi = delta. Throws std::domain_error at w = 0.
double fundamental_solution_2d(cx w);

// Activation family s(x; w) as a function of the parameter w for sample x;
// implementations return 0 outside their parameter support.
struct ActivationFamily {
  std::string name;
  std::function<double(double x, cx w)> s;
};

ActivationFamily relu_disk_family();       // max(0, Re w * x + Im w) on |w| <= 1
ActivationFamily indicator_disk_family();  // 1 on |w| <= 1, independent of x
ActivationFamily smooth_disk_family();     // 1 - |w|^2 on |w| <= 1, independent of x

struct PotentialCheck {
  double tolerance = 0.0;  // 0 disables the self-check
  std::function<bool(double, double)> mask;
};

// Newtonian potential of rho(w) = sum_n duals_n labels_n s(x_n; w) on the
// grid. When check.tolerance > 0, verifies -Lap h = rho over masked interior
// nodes and throws std::runtime_error ("resolution-insufficient") on failure.
GridField robust_h_from_duals(const Eigen::VectorXd& duals,
                              const Eigen::VectorXd& labels,
                              const ActivationFamily& family,
                              const std::vector<double>& samples,
                              const GridField& domain_grid,
                              const PotentialCheck& check = {});

struct ResidualReport {
  double max_abs = 0, mean_abs = 0;
  double max_rel = 0;  // max_abs scaled by max interior |rhs| (>= 1e-12)
  double h_grid = 0;
  int nodes = 0;
};

// max / mean of |(-Lap_stencil h) - rhs| over interior nodes with a two-cell
// margin; a mask restricts to nodes whose whole stencil satisfies it.
ResidualReport laplacian_residual(
    const GridField& h, const GridField& rhs,
    const std::function<bool(double, double)>& mask = {});

// Analytic activation on a rectangle: value, gradient, and s = -Lap(value).
struct SmoothActivation {
  std::function<double(double, double)> value;
  std::function<double(double, double)> dx;
  std::function<double(double, double)> dy;
  std::function<double(double, double)> minus_laplacian;
  std::string descriptor;
};

struct HarmonicActivationReport {
  double norm_sq = 0;     // ||h||^2 for h = sum a_n s_n
  double energy = 0;      // E[h] = Int |grad h|^2
  double cross_form = 0;  // sum a_n a_m Int s_n s_m  (s = -Lap s_n)
  Eigen::MatrixXd grad_gram;   // Int grad s_n . grad s_m
  Eigen::MatrixXd cross_gram;  // Int s_n s_m
  double max_identity_gap = 0;  // scaled divergence-theorem defect
  double max_neumann_violation = 0;
  bool eigen_case = false;  // -Lap s = s within 1e-8 at the quad nodes
};

// Integration-by-parts identity Int grad(s_n).grad(s_m) = Int s_n s_m on a
// rectangle with Neumann data; in the eigen-case it specializes to
// ||h||^2 = E[h]. Throws std::domain_error when the normal derivative
// exceeds 1e-3 anywhere on the boundary.
HarmonicActivationReport harmonic_activation_check(
    const std::vector<SmoothActivation>& family, const Eigen::VectorXd& a,
    double ax, double bx, double ay, double by, int quad_order = 64);

}  // namespace holo
