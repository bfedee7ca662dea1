#include "holo/qp.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace holo {

void QPProblem::validate() const {
  if (Q.rows() != Q.cols()) throw std::invalid_argument("qp: Q not square");
  if (c.size() != Q.rows()) throw std::invalid_argument("qp: c size mismatch");
  if (A.cols() != Q.rows()) throw std::invalid_argument("qp: A column mismatch");
  if (b.size() != A.rows()) throw std::invalid_argument("qp: b size mismatch");
  double asym = (Q - Q.transpose()).cwiseAbs().maxCoeff();
  double scale = 1.0 + Q.cwiseAbs().maxCoeff();
  if (asym > 1e-12 * scale) throw std::invalid_argument("qp: Q not symmetric");
}

namespace {

// max alpha in [0, 1] with v + alpha*dv >= 0
double step_to_boundary(const Eigen::VectorXd& v, const Eigen::VectorXd& dv) {
  double a = 1.0;
  for (int i = 0; i < v.size(); ++i)
    if (dv[i] < 0.0) a = std::min(a, -v[i] / dv[i]);
  return a;
}

}  // namespace

QPSolution solve_qp(const QPProblem& p, const QPOptions& opt) {
  p.validate();
  const int n = p.n(), m = p.m();
  QPSolution sol;
  if (m == 0) {
    Eigen::LDLT<Eigen::MatrixXd> f(p.Q);
    sol.x = f.solve(-p.c);
    sol.lambda.resize(0);
    sol.slack.resize(0);
    sol.objective = p.objective(sol.x);
    return sol;
  }

  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd s = p.A * x - p.b;
  double shift = 1.0 - std::min(0.0, s.minCoeff());
  s.array() += shift;
  Eigen::VectorXd lam = Eigen::VectorXd::Ones(m);

  const double cs = 1.0 + p.c.lpNorm<Eigen::Infinity>();
  const double bs = 1.0 + p.b.lpNorm<Eigen::Infinity>();

  Eigen::VectorXd rd(n), rp(m), rc(m), dx(n), dlam(m), ds(m);
  Eigen::VectorXd dxa(n), dlama(m), dsa(m), rhs(n + m), step(n + m);
  Eigen::VectorXd x_prev = x, s_prev = s, lam_prev = lam;
  // augmented KKT matrix; solving in this form keeps the lambda/s ratios on
  // the diagonal instead of squaring them into normal equations, which
  // matters once the soft-margin cost pushes the duals to ~1e8
  Eigen::MatrixXd K(n + m, n + m);
  double reg = 0.0;

  auto farkas_status = [&p](const Eigen::VectorXd& l) {
    // normalized dual ray with A'lam ~ 0 and b'lam > 0 certifies primal
    // infeasibility
    Eigen::VectorXd lh = l / l.lpNorm<Eigen::Infinity>();
    double at = (p.A.transpose() * lh).lpNorm<Eigen::Infinity>();
    return (at < 1e-6 && p.b.dot(lh) > 1e-6) ? QPStatus::infeasible_certificate
                                             : QPStatus::max_iterations;
  };

  for (int it = 0; it <= opt.max_iterations; ++it) {
    rd = p.Q * x + p.c - p.A.transpose() * lam;
    rp = p.A * x - s - p.b;
    double mu = s.dot(lam) / m;

    sol.dual_residual = rd.lpNorm<Eigen::Infinity>() /
                        (cs + (p.Q * x).lpNorm<Eigen::Infinity>() +
                         (p.A.transpose() * lam).lpNorm<Eigen::Infinity>());
    sol.primal_residual = rp.lpNorm<Eigen::Infinity>() /
                          (bs + (p.A * x).lpNorm<Eigen::Infinity>());
    sol.gap = mu / (1.0 + std::abs(p.objective(x)));
    sol.iterations = it;
    if (sol.dual_residual < opt.tolerance && sol.primal_residual < opt.tolerance &&
        sol.gap < opt.tolerance) {
      sol.status = QPStatus::optimal;
      break;
    }
    if (it == opt.max_iterations) {
      sol.status = farkas_status(lam);
      break;
    }

    K.topLeftCorner(n, n) = p.Q;
    K.topRightCorner(n, m) = -p.A.transpose();
    K.bottomLeftCorner(m, n) = p.A;
    K.bottomRightCorner(m, m).setZero();
    K.bottomRightCorner(m, m).diagonal() = s.cwiseQuotient(lam);
    if (reg > 0.0) K.diagonal().array() += reg;
    Eigen::PartialPivLU<Eigen::MatrixXd> f(K);

    // affine scaling (predictor) direction: target SLe = 0
    rc = s.cwiseProduct(lam);
    rhs.head(n) = -rd;
    rhs.tail(m) = -rp - rc.cwiseQuotient(lam);
    step = f.solve(rhs);
    if (!step.allFinite()) {
      reg = (reg == 0.0) ? 1e-12 : reg * 100.0;
      if (reg > 1e-2) {
        sol.status = QPStatus::max_iterations;
        break;
      }
      --it;
      continue;
    }
    dxa = step.head(n);
    dlama = step.tail(m);
    dsa = p.A * dxa + rp;

    double ap = step_to_boundary(s, dsa);
    double ad = step_to_boundary(lam, dlama);
    double mu_aff = (s + ap * dsa).dot(lam + ad * dlama) / m;
    double sigma = std::pow(mu_aff / mu, 3);

    // corrector with centering
    rc = s.cwiseProduct(lam) + dsa.cwiseProduct(dlama);
    rc.array() -= sigma * mu;
    rhs.head(n) = -rd;
    rhs.tail(m) = -rp - rc.cwiseQuotient(lam);
    step = f.solve(rhs);
    dx = step.head(n);
    dlam = step.tail(m);
    ds = p.A * dx + rp;

    const double tau = 0.995;
    ap = std::min(1.0, tau * step_to_boundary(s, ds));
    ad = std::min(1.0, tau * step_to_boundary(lam, dlam));
    x_prev = x;
    s_prev = s;
    lam_prev = lam;
    x += ap * dx;
    s += ap * ds;
    lam += ad * dlam;
    if (!x.allFinite() || !s.allFinite() || !lam.allFinite()) {
      // diverging iterates: report from the last finite state, where an
      // infeasible program shows its unbounded dual ray
      x = x_prev;
      s = s_prev;
      lam = lam_prev;
      sol.iterations = it + 1;
      sol.status = farkas_status(lam);
      break;
    }
  }

  sol.x = x;
  sol.lambda = lam;
  sol.slack = p.A * x - p.b;
  sol.objective = p.objective(x);
  return sol;
}

QPSolution brute_force_qp(const QPProblem& p) {
  p.validate();
  const int n = p.n(), m = p.m();
  if (m > 16) throw std::invalid_argument("brute_force_qp: m > 16");
  const double feas_tol = 1e-9;

  bool found = false;
  QPSolution best;
  for (unsigned mask = 0; mask < (1u << m); ++mask) {
    int k = __builtin_popcount(mask);
    if (k > n) continue;
    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(n + k, n + k);
    kkt.topLeftCorner(n, n) = p.Q;
    Eigen::VectorXd rhs(n + k);
    rhs.head(n) = -p.c;
    int r = 0;
    for (int i = 0; i < m; ++i) {
      if (!(mask & (1u << i))) continue;
      kkt.block(n + r, 0, 1, n) = p.A.row(i);
      kkt.block(0, n + r, n, 1) = -p.A.row(i).transpose();
      rhs[n + r] = p.b[i];
      ++r;
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(kkt);
    if (!lu.isInvertible()) continue;
    Eigen::VectorXd sol = lu.solve(rhs);
    Eigen::VectorXd x = sol.head(n);
    Eigen::VectorXd nu = sol.tail(k);
    if ((nu.size() > 0 && nu.minCoeff() < -feas_tol)) continue;
    Eigen::VectorXd slack = p.A * x - p.b;
    if (m > 0 && slack.minCoeff() < -feas_tol) continue;
    double obj = p.objective(x);
    if (!found || obj < best.objective - 1e-12) {
      found = true;
      best.x = x;
      best.objective = obj;
      best.slack = slack;
      best.lambda = Eigen::VectorXd::Zero(m);
      r = 0;
      for (int i = 0; i < m; ++i)
        if (mask & (1u << i)) best.lambda[i] = std::max(0.0, nu[r++]);
    }
  }
  if (!found) {
    // no active set yields a feasible KKT point: the program is infeasible
    // (or, for degenerate Q, unbounded; neither occurs for PSD soft margins)
    best.status = QPStatus::infeasible_certificate;
    best.x = Eigen::VectorXd::Zero(n);
    best.lambda = Eigen::VectorXd::Zero(m);
    best.slack = p.A * best.x - p.b;
    return best;
  }
  best.status = QPStatus::optimal;
  Eigen::VectorXd rd = p.Q * best.x + p.c - p.A.transpose() * best.lambda;
  best.dual_residual = rd.lpNorm<Eigen::Infinity>();
  best.primal_residual = m > 0 ? std::max(0.0, -best.slack.minCoeff()) : 0.0;
  best.gap = std::abs(best.slack.dot(best.lambda));
  return best;
}

}  // namespace holo
