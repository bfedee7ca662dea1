#pragma once
// Feature systems and hypotheses.
//
// A FeatureSet is an ordered family {phi_k} with pointwise values and
// derivatives (complex derivative on the disk, d/dx on the interval). A
// Hypothesis is a coefficient vector over a feature set, f = sum a_k phi_k.
//
// The tuning matrix Sigma_jk = Re <phi_j', phi_k'> (gradient Gram under the
// single-copy convention ||grad f||^2 := |f'|^2) drives the harmonic
// transform phi* = Sigma^{-1/2} phi, which turns coefficient-norm
// regularization into Dirichlet-energy regularization.

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "holo/core.hpp"
#include "holo/quadrature.hpp"

namespace holo {

enum class FeatureDomain { unit_disk, unit_interval };

class FeatureSet {
 public:
  virtual ~FeatureSet() = default;
  virtual int size() const = 0;
  virtual FeatureDomain domain() const = 0;
  // Index of the constant feature, -1 if none. Regularization treats it as a
  // free bias column and the harmonic transform carries it through untouched.
  virtual int constant_index() const = 0;
  virtual void eval(cx z, cx* values) const = 0;
  virtual void eval_deriv(cx z, cx* out) const = 0;
  virtual std::string descriptor() const = 0;
  // True for features whose coefficient enters the regularizer.
  // whether coefficient k enters the 1/2-norm-squared regularizer; only the
  // harmonic transform exempts the carried constant
  virtual bool regularized(int) const { return true; }

  Eigen::VectorXcd eval_vec(cx z) const;
  Eigen::VectorXcd deriv_vec(cx z) const;
};

// phi_k(z) = sqrt((k+1)/pi) z^k, k = 0..K-1; orthonormal on the unit disk.
class MonomialBasis final : public FeatureSet {
 public:
  explicit MonomialBasis(int K);
  int size() const override { return K_; }
  FeatureDomain domain() const override { return FeatureDomain::unit_disk; }
  int constant_index() const override { return 0; }
  void eval(cx z, cx* values) const override;
  void eval_deriv(cx z, cx* out) const override;
  std::string descriptor() const override;

 private:
  int K_;
  std::vector<double> norms_;  // sqrt((k+1)/pi)
};

// Linear recombination psi_j = sum_k W_jk phi_k of a base set.
class TransformedBasis final : public FeatureSet {
 public:
  TransformedBasis(std::shared_ptr<const FeatureSet> base, Eigen::MatrixXd W,
                   std::vector<bool> regularized, std::string descriptor);
  int size() const override { return static_cast<int>(W_.rows()); }
  FeatureDomain domain() const override { return base_->domain(); }
  int constant_index() const override { return base_->constant_index(); }
  void eval(cx z, cx* values) const override;
  void eval_deriv(cx z, cx* out) const override;
  std::string descriptor() const override { return descriptor_; }
  bool regularized(int k) const override { return regularized_[k]; }
  const Eigen::MatrixXd& weights() const { return W_; }
  const FeatureSet& base() const { return *base_; }

 private:
  std::shared_ptr<const FeatureSet> base_;
  Eigen::MatrixXd W_;
  std::vector<bool> regularized_;
  std::string descriptor_;
};

// Explicit per-feature value/derivative rules; test scaffolding.
class CustomBasis final : public FeatureSet {
 public:
  struct Feature {
    std::function<cx(cx)> value, deriv;
  };
  CustomBasis(FeatureDomain dom, std::vector<Feature> fs, int constant_index,
              std::string descriptor);
  int size() const override { return static_cast<int>(fs_.size()); }
  FeatureDomain domain() const override { return dom_; }
  int constant_index() const override { return const_idx_; }
  void eval(cx z, cx* values) const override;
  void eval_deriv(cx z, cx* out) const override;
  std::string descriptor() const override { return descriptor_; }

 private:
  FeatureDomain dom_;
  std::vector<Feature> fs_;
  int const_idx_;
  std::string descriptor_;
};

// Compactly supported bump per anchor point; feature k sifts values at its
// anchor (the memorizing rule of the normality counterexample probe).
class DiracBasis final : public FeatureSet {
 public:
  DiracBasis(FeatureDomain dom, std::vector<cx> anchors, double width);
  int size() const override { return static_cast<int>(anchors_.size()); }
  FeatureDomain domain() const override { return dom_; }
  int constant_index() const override { return -1; }
  void eval(cx z, cx* values) const override;
  void eval_deriv(cx z, cx* out) const override;
  std::string descriptor() const override;

 private:
  FeatureDomain dom_;
  std::vector<cx> anchors_;
  double width_;
};

// Projections psi_alpha(x) of an activation family onto a disk basis,
// tabulated on a uniform x grid in [0,1] with cubic interpolation off-grid.
class TabulatedBasis final : public FeatureSet {
 public:
  // table(i, alpha) = psi_alpha(x_i), x_i = i/(grid_n-1).
  TabulatedBasis(Eigen::MatrixXcd table, std::string descriptor,
                 std::vector<bool> regularized = {});
  int size() const override { return static_cast<int>(table_.cols()); }
  FeatureDomain domain() const override { return FeatureDomain::unit_interval; }
  int constant_index() const override { return -1; }
  void eval(cx z, cx* values) const override;
  void eval_deriv(cx z, cx* out) const override;
  std::string descriptor() const override { return descriptor_; }
  bool regularized(int k) const override {
    return regularized_.empty() ? true : regularized_[k];
  }
  const Eigen::MatrixXcd& table() const { return table_; }
  std::string to_csv() const;

 private:
  Eigen::MatrixXcd table_;
  std::string descriptor_;
  std::vector<bool> regularized_;
};

struct Hypothesis {
  std::shared_ptr<const FeatureSet> features;
  Eigen::VectorXcd coeffs;

  cx operator()(cx z) const;
  cx deriv(cx z) const;
};

// [sign(Re f(z)) != t] + (Im f(z))^2; a vanishing real part counts as a
// misclassification.
double complex_01_loss(double t, cx z, const Hypothesis& h);

// Sigma_jk = Re integral of phi_j'(z) conj(phi_k'(z)); symmetrized after
// quadrature. For the orthonormal monomials the closed form is the diagonal
// k(k+1).
Eigen::MatrixXd tuning_matrix(const FeatureSet& fs, const QuadratureRule& q);

// Spectral inverse square root of Sigma restricted to the non-constant
// features; the constant is carried through untransformed and flagged
// unregularized. Throws std::domain_error when the non-constant block has an
// eigenvalue <= min_eigenvalue.
std::shared_ptr<const FeatureSet> harmonic_transform(
    std::shared_ptr<const FeatureSet> fs, const QuadratureRule& q,
    double min_eigenvalue = 1e-10);

// E[f] = integral of |f'|^2 over the feature domain.
double dirichlet_energy(const Hypothesis& h, const QuadratureRule& q);

// ReLU neuron family s(x; w) = max(0, Re[w] x + Im[w]), x in [0,1], w in the
// unit disk.
double relu_activation(double x, cx w);

// psi_alpha(x) = integral over the disk of phi_alpha(w) s(x; w) dV(w) for the
// first K monomial features, tabulated on grid_n equispaced x. The angular
// integral is restricted to the half-plane where the neuron is active, so
// plain Gauss-Legendre converges at full order despite the ReLU kink.
// conjugate_basis integrates conj(phi_alpha) s instead, which conjugates the
// table entrywise (s is real).
std::shared_ptr<const TabulatedBasis> project_relu_activation(
    int K, int grid_n = 513, int n_radial = 64, int n_angular = 64,
    bool conjugate_basis = false);

// Same projection onto the harmonic counterpart of the monomial basis
// (diagonal scaling 1/sqrt(k(k+1)) on the non-constant features).
std::shared_ptr<const TabulatedBasis> project_relu_activation_harmonic(
    int K, int grid_n = 513, int n_radial = 64, int n_angular = 64,
    bool conjugate_basis = false);

// Orthonormal shifted Legendre polynomials sqrt(2k+1) P_k(2x-1) on [0,1];
// the real feature family for interval classifiers.
std::shared_ptr<const FeatureSet> legendre_interval_basis(int K);

}  // namespace holo
