#include "holo/features.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace holo {

Eigen::VectorXcd FeatureSet::eval_vec(cx z) const {
  Eigen::VectorXcd v(size());
  eval(z, v.data());
  return v;
}

Eigen::VectorXcd FeatureSet::deriv_vec(cx z) const {
  Eigen::VectorXcd v(size());
  eval_deriv(z, v.data());
  return v;
}

MonomialBasis::MonomialBasis(int K) : K_(K) {
  if (K < 1) throw std::invalid_argument("MonomialBasis: K < 1");
  norms_.resize(K);
  for (int k = 0; k < K; ++k) norms_[k] = std::sqrt((k + 1) / kPi);
}

void MonomialBasis::eval(cx z, cx* values) const {
  cx p = 1.0;
  for (int k = 0; k < K_; ++k) {
    values[k] = norms_[k] * p;
    p *= z;
  }
}

void MonomialBasis::eval_deriv(cx z, cx* out) const {
  out[0] = 0.0;
  cx p = 1.0;  // z^{k-1}
  for (int k = 1; k < K_; ++k) {
    out[k] = norms_[k] * static_cast<double>(k) * p;
    p *= z;
  }
}

std::string MonomialBasis::descriptor() const {
  return "monomial_orthonormal K=" + std::to_string(K_);
}

TransformedBasis::TransformedBasis(std::shared_ptr<const FeatureSet> base,
                                   Eigen::MatrixXd W,
                                   std::vector<bool> regularized,
                                   std::string descriptor)
    : base_(std::move(base)),
      W_(std::move(W)),
      regularized_(std::move(regularized)),
      descriptor_(std::move(descriptor)) {
  if (W_.cols() != base_->size() ||
      regularized_.size() != static_cast<std::size_t>(W_.rows()))
    throw std::invalid_argument("TransformedBasis: shape mismatch");
}

void TransformedBasis::eval(cx z, cx* values) const {
  thread_local std::vector<cx> scratch;
  scratch.resize(base_->size());
  base_->eval(z, scratch.data());
  Eigen::Map<const Eigen::VectorXcd> b(scratch.data(), base_->size());
  Eigen::Map<Eigen::VectorXcd> out(values, W_.rows());
  out = W_ * b;
}

void TransformedBasis::eval_deriv(cx z, cx* out) const {
  thread_local std::vector<cx> scratch;
  scratch.resize(base_->size());
  base_->eval_deriv(z, scratch.data());
  Eigen::Map<const Eigen::VectorXcd> b(scratch.data(), base_->size());
  Eigen::Map<Eigen::VectorXcd> o(out, W_.rows());
  o = W_ * b;
}

CustomBasis::CustomBasis(FeatureDomain dom, std::vector<Feature> fs,
                         int constant_index, std::string descriptor)
    : dom_(dom),
      fs_(std::move(fs)),
      const_idx_(constant_index),
      descriptor_(std::move(descriptor)) {}

void CustomBasis::eval(cx z, cx* values) const {
  for (std::size_t k = 0; k < fs_.size(); ++k) values[k] = fs_[k].value(z);
}

void CustomBasis::eval_deriv(cx z, cx* out) const {
  for (std::size_t k = 0; k < fs_.size(); ++k) out[k] = fs_[k].deriv(z);
}

DiracBasis::DiracBasis(FeatureDomain dom, std::vector<cx> anchors, double width)
    : dom_(dom), anchors_(std::move(anchors)), width_(width) {
  if (width_ <= 0) throw std::invalid_argument("DiracBasis: width <= 0");
}

// b(u) = (1-u^2)^2 on |u| < 1; value 1 at the anchor, support width_.
void DiracBasis::eval(cx z, cx* values) const {
  for (std::size_t k = 0; k < anchors_.size(); ++k) {
    double u = std::abs(z - anchors_[k]) / width_;
    values[k] = (u < 1.0) ? (1.0 - u * u) * (1.0 - u * u) : 0.0;
  }
}

// The bump is not holomorphic; the probe only reads values, so the
// derivative is reported as 0.
void DiracBasis::eval_deriv(cx, cx* out) const {
  for (std::size_t k = 0; k < anchors_.size(); ++k) out[k] = 0.0;
}

std::string DiracBasis::descriptor() const {
  return "dirac n=" + std::to_string(anchors_.size()) +
         " width=" + fmt_double(width_);
}

TabulatedBasis::TabulatedBasis(Eigen::MatrixXcd table, std::string descriptor,
                               std::vector<bool> regularized)
    : table_(std::move(table)),
      descriptor_(std::move(descriptor)),
      regularized_(std::move(regularized)) {
  if (table_.rows() < 4)
    throw std::invalid_argument("TabulatedBasis: need >= 4 grid rows");
  if (!regularized_.empty() &&
      regularized_.size() != static_cast<std::size_t>(table_.cols()))
    throw std::invalid_argument("TabulatedBasis: flag size mismatch");
}

namespace {

// Cubic Hermite on a uniform grid with central-difference slopes (one-sided
// at the ends). Returns value and d/dx.
struct CubicEval {
  int i;
  double u, h;
};

CubicEval cubic_locate(double x, int n) {
  double h = 1.0 / (n - 1);
  double cl = std::min(std::max(x, 0.0), 1.0);
  int i = std::min(static_cast<int>(cl / h), n - 2);
  return {i, (cl - i * h) / h, h};
}

cx cubic_slope(const Eigen::MatrixXcd& t, int col, int i) {
  int n = static_cast<int>(t.rows());
  if (i == 0) return t(1, col) - t(0, col);
  if (i == n - 1) return t(n - 1, col) - t(n - 2, col);
  return 0.5 * (t(i + 1, col) - t(i - 1, col));
}

}  // namespace

void TabulatedBasis::eval(cx z, cx* values) const {
  auto [i, u, h] = cubic_locate(z.real(), static_cast<int>(table_.rows()));
  double h00 = (1 + 2 * u) * (1 - u) * (1 - u);
  double h10 = u * (1 - u) * (1 - u);
  double h01 = u * u * (3 - 2 * u);
  double h11 = u * u * (u - 1);
  for (int k = 0; k < size(); ++k) {
    cx m0 = cubic_slope(table_, k, i), m1 = cubic_slope(table_, k, i + 1);
    values[k] = h00 * table_(i, k) + h10 * m0 + h01 * table_(i + 1, k) +
                h11 * m1;
  }
}

void TabulatedBasis::eval_deriv(cx z, cx* out) const {
  auto [i, u, h] = cubic_locate(z.real(), static_cast<int>(table_.rows()));
  double d00 = 6 * u * (u - 1);
  double d10 = (1 - u) * (1 - 3 * u);
  double d01 = 6 * u * (1 - u);
  double d11 = u * (3 * u - 2);
  for (int k = 0; k < size(); ++k) {
    cx m0 = cubic_slope(table_, k, i), m1 = cubic_slope(table_, k, i + 1);
    out[k] = (d00 * table_(i, k) + d10 * m0 + d01 * table_(i + 1, k) +
              d11 * m1) /
             h;
  }
}

std::string TabulatedBasis::to_csv() const {
  std::ostringstream os;
  os << "# " << descriptor_ << "\n";
  os << "x";
  for (int k = 0; k < size(); ++k) os << ",re_" << k << ",im_" << k;
  os << "\n";
  int n = static_cast<int>(table_.rows());
  for (int i = 0; i < n; ++i) {
    os << fmt_double(static_cast<double>(i) / (n - 1));
    for (int k = 0; k < size(); ++k)
      os << "," << fmt_double(table_(i, k).real()) << ","
         << fmt_double(table_(i, k).imag());
    os << "\n";
  }
  return os.str();
}

cx Hypothesis::operator()(cx z) const {
  thread_local std::vector<cx> scratch;
  scratch.resize(features->size());
  features->eval(z, scratch.data());
  cx s = 0.0;
  for (int k = 0; k < features->size(); ++k) s += coeffs[k] * scratch[k];
  return s;
}

cx Hypothesis::deriv(cx z) const {
  thread_local std::vector<cx> scratch;
  scratch.resize(features->size());
  features->eval_deriv(z, scratch.data());
  cx s = 0.0;
  for (int k = 0; k < features->size(); ++k) s += coeffs[k] * scratch[k];
  return s;
}

double complex_01_loss(double t, cx z, const Hypothesis& h) {
  cx v = h(z);
  double mis = sign0(v.real()) == t ? 0.0 : 1.0;
  return mis + v.imag() * v.imag();
}

Eigen::MatrixXd tuning_matrix(const FeatureSet& fs, const QuadratureRule& q) {
  int K = fs.size();
  Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(K, K);
  Eigen::VectorXcd d(K);
  for (std::size_t i = 0; i < q.nodes.size(); ++i) {
    fs.eval_deriv(q.nodes[i], d.data());
    for (int j = 0; j < K; ++j)
      for (int k = j; k < K; ++k)
        sigma(j, k) += q.weights[i] * (d[j] * std::conj(d[k])).real();
  }
  for (int j = 0; j < K; ++j)
    for (int k = j + 1; k < K; ++k) sigma(k, j) = sigma(j, k);
  return sigma;
}

std::shared_ptr<const FeatureSet> harmonic_transform(
    std::shared_ptr<const FeatureSet> fs, const QuadratureRule& q,
    double min_eigenvalue) {
  int K = fs->size();
  int ci = fs->constant_index();
  Eigen::MatrixXd sigma = tuning_matrix(*fs, q);

  std::vector<int> nc;  // non-constant feature indices
  nc.reserve(K);
  for (int k = 0; k < K; ++k)
    if (k != ci) nc.push_back(k);

  Eigen::MatrixXd block(nc.size(), nc.size());
  for (std::size_t a = 0; a < nc.size(); ++a)
    for (std::size_t b = 0; b < nc.size(); ++b)
      block(a, b) = sigma(nc[a], nc[b]);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(block);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("harmonic_transform: eigensolver failed");
  double min_eig = es.eigenvalues().minCoeff();
  if (min_eig <= min_eigenvalue)
    throw std::domain_error(
        "harmonic_transform: tuning matrix not positive definite on the "
        "non-constant features; offending eigenvalue " +
        fmt_double(min_eig));

  Eigen::VectorXd inv_sqrt = es.eigenvalues().array().rsqrt();
  Eigen::MatrixXd root =
      es.eigenvectors() * inv_sqrt.asDiagonal() * es.eigenvectors().transpose();

  Eigen::MatrixXd W = Eigen::MatrixXd::Identity(K, K);
  for (std::size_t a = 0; a < nc.size(); ++a)
    for (std::size_t b = 0; b < nc.size(); ++b)
      W(nc[a], nc[b]) = root(a, b);

  std::vector<bool> reg(K, true);
  if (ci >= 0) reg[ci] = false;
  return std::make_shared<TransformedBasis>(std::move(fs), std::move(W),
                                            std::move(reg),
                                            "harmonic(" + std::to_string(K) + ")");
}

double dirichlet_energy(const Hypothesis& h, const QuadratureRule& q) {
  return integrate_real(q, [&h](cx z) {
    cx d = h.deriv(z);
    return std::norm(d);
  });
}

double relu_activation(double x, cx w) {
  double a = w.real() * x + w.imag();
  return a > 0 ? a : 0.0;
}

namespace {

Eigen::MatrixXcd relu_projection_table(int K, int grid_n, int n_radial,
                                       int n_angular) {
  if (K < 1 || grid_n < 4) throw std::invalid_argument("relu projection");
  std::vector<double> rx, rw, ax, aw;
  gauss_legendre(n_radial, rx, rw);
  gauss_legendre(n_angular, ax, aw);
  std::vector<double> norms(K);
  for (int k = 0; k < K; ++k) norms[k] = std::sqrt((k + 1) / kPi);

  Eigen::MatrixXcd table(grid_n, K);
  std::vector<cx> acc(K);
  for (int gi = 0; gi < grid_n; ++gi) {
    double x = static_cast<double>(gi) / (grid_n - 1);
    // The neuron is active on the arc theta in (-phi0, pi - phi0) where
    // x cos(theta) + sin(theta) > 0.
    double phi0 = std::atan2(x, 1.0);
    double a = -phi0, b = kPi - phi0;
    std::fill(acc.begin(), acc.end(), cx(0.0));
    for (int i = 0; i < n_radial; ++i) {
      double r = 0.5 * (rx[i] + 1.0);
      double wr = 0.5 * rw[i] * r;  // r dr
      for (int j = 0; j < n_angular; ++j) {
        double th = 0.5 * (b - a) * ax[j] + 0.5 * (a + b);
        double wth = 0.5 * (b - a) * aw[j];
        cx wnode(r * std::cos(th), r * std::sin(th));
        double s = relu_activation(x, wnode);
        cx p = 1.0;
        double wgt = wr * wth * s;
        for (int k = 0; k < K; ++k) {
          acc[k] += wgt * norms[k] * p;
          p *= wnode;
        }
      }
    }
    for (int k = 0; k < K; ++k) table(gi, k) = acc[k];
  }
  return table;
}

}  // namespace

std::shared_ptr<const TabulatedBasis> project_relu_activation(int K, int grid_n,
                                                              int n_radial,
                                                              int n_angular,
                                                              bool conjugate_basis) {
  Eigen::MatrixXcd t = relu_projection_table(K, grid_n, n_radial, n_angular);
  if (conjugate_basis) t = t.conjugate();
  return std::make_shared<TabulatedBasis>(
      std::move(t), "ann_projected relu K=" + std::to_string(K));
}

std::shared_ptr<const TabulatedBasis> project_relu_activation_harmonic(
    int K, int grid_n, int n_radial, int n_angular, bool conjugate_basis) {
  Eigen::MatrixXcd t = relu_projection_table(K, grid_n, n_radial, n_angular);
  if (conjugate_basis) t = t.conjugate();
  for (int k = 1; k < K; ++k)
    t.col(k) /= std::sqrt(static_cast<double>(k) * (k + 1));
  std::vector<bool> reg(K, true);
  reg[0] = false;  // projection of the unregularized disk constant
  return std::make_shared<TabulatedBasis>(
      std::move(t), "ann_projected relu harmonic K=" + std::to_string(K),
      std::move(reg));
}

std::shared_ptr<const FeatureSet> legendre_interval_basis(int K) {
  if (K < 1) throw std::invalid_argument("legendre_interval_basis: K < 1");
  std::vector<CustomBasis::Feature> fs(K);
  for (int k = 0; k < K; ++k) {
    double scale = std::sqrt(2.0 * k + 1.0);
    fs[k].value = [k, scale](cx z) {
      double u = 2.0 * z.real() - 1.0;
      double pm = 0.0, p = 1.0;  // P_{j-1}, P_j
      for (int j = 0; j < k; ++j) {
        double pn = ((2 * j + 1) * u * p - j * pm) / (j + 1);
        pm = p;
        p = pn;
      }
      return cx(scale * p, 0.0);
    };
    fs[k].deriv = [k, scale](cx z) {
      double u = 2.0 * z.real() - 1.0;
      double pm = 0.0, p = 1.0, dm = 0.0, d = 0.0;  // values and du-derivatives
      for (int j = 0; j < k; ++j) {
        double pn = ((2 * j + 1) * u * p - j * pm) / (j + 1);
        double dn = ((2 * j + 1) * (p + u * d) - j * dm) / (j + 1);
        pm = p;
        p = pn;
        dm = d;
        d = dn;
      }
      return cx(2.0 * scale * d, 0.0);  // chain rule for u = 2x - 1
    };
  }
  return std::make_shared<CustomBasis>(FeatureDomain::unit_interval,
                                       std::move(fs), 0,
                                       "legendre(" + std::to_string(K) + ")");
}

}  // namespace holo
