#include "holo/pde.hpp"

#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>
#include <unsupported/Eigen/FFT>

#include "holo/quadrature.hpp"

namespace holo {

void GridField::validate() const {
  if (nx < 3 || ny < 3) throw std::invalid_argument("grid: resolution < 3");
  if (!(bx > ax) || !(by > ay)) throw std::invalid_argument("grid: empty rectangle");
  if (values.rows() != nx || values.cols() != ny)
    throw std::invalid_argument("grid: value shape mismatch");
}

GridField make_grid(double ax, double bx, double ay, double by, int nx, int ny) {
  GridField g;
  g.ax = ax;
  g.bx = bx;
  g.ay = ay;
  g.by = by;
  g.nx = nx;
  g.ny = ny;
  g.values = Eigen::MatrixXd::Zero(nx, ny);
  g.validate();
  return g;
}

GridField sample_grid(double ax, double bx, double ay, double by, int nx, int ny,
                      const std::function<double(double, double)>& f) {
  GridField g = make_grid(ax, bx, ay, by, nx, ny);
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) g.values(i, j) = f(g.x(i), g.y(j));
  return g;
}

std::string grid_to_csv(const GridField& g) {
  std::ostringstream os;
  os << "x,y,value\n";
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      os << fmt_double(g.x(i)) << ',' << fmt_double(g.y(j)) << ','
         << fmt_double(g.values(i, j)) << '\n';
  return os.str();
}

double fundamental_solution_2d(cx w) {
  double r = std::abs(w);
  if (r == 0.0) throw std::domain_error("fundamental_solution_2d: singular at 0");
  return -std::log(r) / (2.0 * kPi);
}

ActivationFamily relu_disk_family() {
  return {"relu_disk", [](double x, cx w) {
            if (std::abs(w) > 1.0) return 0.0;
            return std::max(0.0, w.real() * x + w.imag());
          }};
}

ActivationFamily indicator_disk_family() {
  return {"indicator_disk",
          [](double, cx w) { return std::abs(w) <= 1.0 ? 1.0 : 0.0; }};
}

ActivationFamily smooth_disk_family() {
  return {"smooth_disk", [](double, cx w) {
            double r2 = std::norm(w);
            return r2 <= 1.0 ? 1.0 - r2 : 0.0;
          }};
}

namespace {

int next_pow2(int n) {
  int p = 1;
  while (p < n) p *= 2;
  return p;
}

// field = sum_j kernel(i - j) * rho_j via FFT; kernel premultiplied by cell
// area except the zero offset, which carries the closed-form cell integral
// of Phi: Int_{square, side h} -ln(r)/(2pi) dA = -(4a^2/2pi)(ln(a sqrt 2)
// - 3/2 + pi/4), a = h/2.
Eigen::MatrixXd convolve_potential(const Eigen::MatrixXd& rho, double hx,
                                   double hy) {
  const int nx = static_cast<int>(rho.rows()), ny = static_cast<int>(rho.cols());
  const int px = next_pow2(2 * nx - 1), py = next_pow2(2 * ny - 1);
  const double area = hx * hy;

  Eigen::MatrixXcd k = Eigen::MatrixXcd::Zero(px, py);
  const double a = 0.5 * std::sqrt(area);  // singular cell treated as square
  const double self = -(4.0 * a * a) / (2.0 * kPi) *
                      (std::log(a * std::sqrt(2.0)) - 1.5 + kPi / 4.0);
  for (int di = -(nx - 1); di <= nx - 1; ++di)
    for (int dj = -(ny - 1); dj <= ny - 1; ++dj) {
      double v;
      if (di == 0 && dj == 0)
        v = self;
      else
        v = area * fundamental_solution_2d(cx(di * hx, dj * hy));
      k((di + px) % px, (dj + py) % py) = v;
    }

  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(px, py);
  m.topLeftCorner(nx, ny) = rho.cast<cx>();

  Eigen::FFT<double> fft;
  auto fft2 = [&fft, px, py](Eigen::MatrixXcd& g, bool inverse) {
    Eigen::VectorXcd buf(std::max(px, py)), out(std::max(px, py));
    for (int j = 0; j < py; ++j) {
      buf.head(px) = g.col(j);
      if (inverse)
        fft.inv(out.data(), buf.data(), px);
      else
        fft.fwd(out.data(), buf.data(), px);
      g.col(j) = out.head(px);
    }
    for (int i = 0; i < px; ++i) {
      buf.head(py) = g.row(i).transpose();
      if (inverse)
        fft.inv(out.data(), buf.data(), py);
      else
        fft.fwd(out.data(), buf.data(), py);
      g.row(i) = out.head(py).transpose();
    }
  };
  fft2(k, false);
  fft2(m, false);
  k = k.cwiseProduct(m);
  fft2(k, true);
  return k.topLeftCorner(nx, ny).real();
}

}  // namespace

GridField robust_h_from_duals(const Eigen::VectorXd& duals,
                              const Eigen::VectorXd& labels,
                              const ActivationFamily& family,
                              const std::vector<double>& samples,
                              const GridField& domain_grid,
                              const PotentialCheck& check) {
  domain_grid.validate();
  const int N = static_cast<int>(samples.size());
  if (duals.size() != N || labels.size() != N)
    throw std::invalid_argument("robust_h_from_duals: size mismatch");
  if (N > 0 && duals.minCoeff() < -1e-9)
    throw std::invalid_argument("robust_h_from_duals: negative dual");

  GridField rho = make_grid(domain_grid.ax, domain_grid.bx, domain_grid.ay,
                            domain_grid.by, domain_grid.nx, domain_grid.ny);
  bool any = false;
  for (int n = 0; n < N; ++n) {
    double c = duals[n] * labels[n];
    if (c == 0.0) continue;
    any = true;
    for (int i = 0; i < rho.nx; ++i)
      for (int j = 0; j < rho.ny; ++j)
        rho.values(i, j) += c * family.s(samples[n], cx(rho.x(i), rho.y(j)));
  }

  GridField h = make_grid(rho.ax, rho.bx, rho.ay, rho.by, rho.nx, rho.ny);
  if (any) h.values = convolve_potential(rho.values, rho.hx(), rho.hy());

  if (check.tolerance > 0.0) {
    ResidualReport r = laplacian_residual(h, rho, check.mask);
    if (r.max_rel > check.tolerance)
      throw std::runtime_error("resolution-insufficient: max relative residual " +
                               fmt_double(r.max_rel) + " at spacing " +
                               fmt_double(r.h_grid));
  }
  return h;
}

ResidualReport laplacian_residual(
    const GridField& h, const GridField& rhs,
    const std::function<bool(double, double)>& mask) {
  h.validate();
  rhs.validate();
  if (h.nx != rhs.nx || h.ny != rhs.ny || h.ax != rhs.ax || h.bx != rhs.bx ||
      h.ay != rhs.ay || h.by != rhs.by)
    throw std::invalid_argument("laplacian_residual: mismatched grids");

  const double dx = h.hx(), dy = h.hy();
  ResidualReport rep;
  rep.h_grid = std::max(dx, dy);
  double sum = 0.0, scale = 0.0;
  for (int i = 2; i < h.nx - 2; ++i) {
    for (int j = 2; j < h.ny - 2; ++j) {
      if (mask) {
        bool ok = mask(h.x(i), h.y(j)) && mask(h.x(i - 1), h.y(j)) &&
                  mask(h.x(i + 1), h.y(j)) && mask(h.x(i), h.y(j - 1)) &&
                  mask(h.x(i), h.y(j + 1));
        if (!ok) continue;
      }
      double lap = (h.values(i + 1, j) - 2.0 * h.values(i, j) + h.values(i - 1, j)) /
                       (dx * dx) +
                   (h.values(i, j + 1) - 2.0 * h.values(i, j) + h.values(i, j - 1)) /
                       (dy * dy);
      double res = std::abs(-lap - rhs.values(i, j));
      rep.max_abs = std::max(rep.max_abs, res);
      scale = std::max(scale, std::abs(rhs.values(i, j)));
      sum += res;
      ++rep.nodes;
    }
  }
  if (rep.nodes > 0) rep.mean_abs = sum / rep.nodes;
  rep.max_rel = rep.max_abs / std::max(scale, 1e-12);
  if (scale < 1e-12) rep.max_rel = rep.max_abs;  // zero rhs: report absolute
  return rep;
}

HarmonicActivationReport harmonic_activation_check(
    const std::vector<SmoothActivation>& family, const Eigen::VectorXd& a,
    double ax, double bx, double ay, double by, int quad_order) {
  const int F = static_cast<int>(family.size());
  if (a.size() != F)
    throw std::invalid_argument("harmonic_activation_check: coefficient size");
  if (F == 0) throw std::invalid_argument("harmonic_activation_check: empty family");

  std::vector<double> gx, gw;
  gauss_legendre(quad_order, gx, gw);
  auto map1 = [](double t, double lo, double hi, double& p, double& w) {
    p = 0.5 * (hi - lo) * t + 0.5 * (hi + lo);
    w = 0.5 * (hi - lo);
  };

  HarmonicActivationReport rep;

  // Neumann data on the four edges at the 1-D quadrature nodes
  for (int q = 0; q < quad_order; ++q) {
    double p, w;
    map1(gx[q], ax, bx, p, w);
    (void)w;
    for (const auto& s : family) {
      rep.max_neumann_violation =
          std::max({rep.max_neumann_violation, std::abs(s.dy(p, ay)),
                    std::abs(s.dy(p, by))});
    }
    map1(gx[q], ay, by, p, w);
    for (const auto& s : family) {
      rep.max_neumann_violation =
          std::max({rep.max_neumann_violation, std::abs(s.dx(ax, p)),
                    std::abs(s.dx(bx, p))});
    }
  }
  if (rep.max_neumann_violation > 1e-3)
    throw std::domain_error("harmonic_activation_check: Neumann violation " +
                            fmt_double(rep.max_neumann_violation));

  rep.grad_gram = Eigen::MatrixXd::Zero(F, F);
  rep.cross_gram = Eigen::MatrixXd::Zero(F, F);
  Eigen::MatrixXd val_gram = Eigen::MatrixXd::Zero(F, F);
  bool eigen = true;

  std::vector<double> v(F), sdx(F), sdy(F), ml(F);
  for (int qi = 0; qi < quad_order; ++qi) {
    double x, wx;
    map1(gx[qi], ax, bx, x, wx);
    wx *= gw[qi];
    for (int qj = 0; qj < quad_order; ++qj) {
      double y, wy;
      map1(gx[qj], ay, by, y, wy);
      double w = wx * wy * gw[qj];
      for (int n = 0; n < F; ++n) {
        v[n] = family[n].value(x, y);
        sdx[n] = family[n].dx(x, y);
        sdy[n] = family[n].dy(x, y);
        ml[n] = family[n].minus_laplacian(x, y);
        if (std::abs(ml[n] - v[n]) > 1e-8 * (1.0 + std::abs(v[n]))) eigen = false;
      }
      for (int n = 0; n < F; ++n)
        for (int m = 0; m < F; ++m) {
          rep.grad_gram(n, m) += w * (sdx[n] * sdx[m] + sdy[n] * sdy[m]);
          rep.cross_gram(n, m) += w * v[n] * ml[m];
          val_gram(n, m) += w * v[n] * v[m];
        }
    }
  }
  rep.eigen_case = eigen;

  rep.norm_sq = a.dot(val_gram * a);
  rep.energy = a.dot(rep.grad_gram * a);
  rep.cross_form = a.dot(rep.cross_gram * a);
  for (int n = 0; n < F; ++n)
    for (int m = 0; m < F; ++m) {
      double gap = std::abs(rep.grad_gram(n, m) - rep.cross_gram(n, m)) /
                   (1.0 + std::abs(rep.cross_gram(n, m)));
      rep.max_identity_gap = std::max(rep.max_identity_gap, gap);
    }
  return rep;
}

}  // namespace holo
