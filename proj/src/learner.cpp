#include "holo/learner.hpp"

#include <cmath>
#include <cstring>
#include <sstream>
#include <stdexcept>

#include "holo/quadrature.hpp"

namespace holo {

std::string to_string(FeatureKind k) {
  switch (k) {
    case FeatureKind::orthonormal: return "orthonormal";
    case FeatureKind::harmonic: return "harmonic";
    case FeatureKind::ann_projected: return "ann_projected";
    case FeatureKind::ann_projected_harmonic: return "ann_projected_harmonic";
  }
  return "?";
}

FeatureKind feature_kind_from_string(const std::string& s) {
  if (s == "orthonormal") return FeatureKind::orthonormal;
  if (s == "harmonic") return FeatureKind::harmonic;
  if (s == "ann_projected") return FeatureKind::ann_projected;
  if (s == "ann_projected_harmonic") return FeatureKind::ann_projected_harmonic;
  throw std::invalid_argument("unknown feature kind: " + s);
}

void TrainConfig::validate() const {
  if (!(C > 0.0)) throw std::invalid_argument("train: C must be positive");
  if (K < 1) throw std::invalid_argument("train: K must be >= 1");
  if (!(qp_tolerance > 0.0)) throw std::invalid_argument("train: bad qp tolerance");
}

std::shared_ptr<const FeatureSet> make_features(FeatureKind kind, int K) {
  switch (kind) {
    case FeatureKind::orthonormal:
      return std::make_shared<MonomialBasis>(K);
    case FeatureKind::harmonic:
      return harmonic_transform(std::make_shared<MonomialBasis>(K), disk_rule());
    case FeatureKind::ann_projected:
      return project_relu_activation(K);
    case FeatureKind::ann_projected_harmonic:
      return project_relu_activation_harmonic(K);
  }
  throw std::invalid_argument("make_features: bad kind");
}

std::string dataset_fingerprint(const Dataset& data) {
  std::vector<double> raw;
  raw.reserve(3 * data.samples.size());
  for (const auto& s : data.samples) {
    raw.push_back(s.z.real());
    raw.push_back(s.z.imag());
    raw.push_back(s.t);
  }
  std::uint64_t h = fnv1a(raw.data(), raw.size() * sizeof(double));
  char buf[96];
  std::snprintf(buf, sizeof buf, "%s:n=%d:%016llx", data.provenance.c_str(),
                data.n(), static_cast<unsigned long long>(h));
  return buf;
}

namespace {

TrainedModel package(std::shared_ptr<const FeatureSet> fs, Eigen::VectorXcd a,
                     QPSolution qp, Eigen::VectorXd xi, Eigen::VectorXd duals,
                     const TrainConfig& cfg, const Dataset& data) {
  // hard margin is soft margin with C = 1e8; the slack post-check turns a
  // separability failure into an explicit error instead of a silent fit
  if (cfg.C >= 1e8 && xi.size() > 0 && xi.maxCoeff() > 1e-6)
    throw std::runtime_error("train: margin-infeasible (max slack " +
                             fmt_double(xi.maxCoeff()) + " at hard margin)");
  TrainedModel m;
  m.hypothesis = Hypothesis{std::move(fs), std::move(a)};
  m.qp = std::move(qp);
  m.xi = std::move(xi);
  m.duals = std::move(duals);
  m.config = cfg;
  m.dataset_fingerprint = dataset_fingerprint(data);
  return m;
}

void require_converged(const QPSolution& s) {
  if (s.status == QPStatus::optimal) return;
  throw std::runtime_error("train: qp did not converge (status " +
                           std::to_string(static_cast<int>(s.status)) +
                           ", gap " + fmt_double(s.gap) + ")");
}

}  // namespace

TrainedModel train_complex_svc(const Dataset& data, const TrainConfig& cfg) {
  cfg.validate();
  const int N = data.n();
  if (N == 0) throw std::invalid_argument("train: empty dataset");
  auto fs = make_features(cfg.kind, cfg.K);
  const int K = fs->size();

  Eigen::MatrixXcd P(N, K);
  std::vector<cx> row(K);
  for (int i = 0; i < N; ++i) {
    cx zi = cfg.conjugate_samples ? std::conj(data.samples[i].z) : data.samples[i].z;
    fs->eval(zi, row.data());
    for (int k = 0; k < K; ++k) P(i, k) = row[k];
  }
  Eigen::MatrixXd R = P.real(), I = P.imag();

  // variables [u; v; xi] with u = Re a, v = Im a
  const int nv = 2 * K + N;
  QPProblem p;
  p.Q = Eigen::MatrixXd::Zero(nv, nv);
  for (int k = 0; k < K; ++k) {
    double r = fs->regularized(k) ? 1.0 : 0.0;
    p.Q(k, k) = r;
    p.Q(K + k, K + k) = r;
  }
  p.c = Eigen::VectorXd::Zero(nv);
  p.c.tail(N).setConstant(cfg.C);
  p.A = Eigen::MatrixXd::Zero(4 * N, nv);
  p.b = Eigen::VectorXd::Zero(4 * N);
  for (int i = 0; i < N; ++i) {
    double t = data.samples[i].t;
    // t_n Re f + xi_n >= 1
    p.A.block(i, 0, 1, K) = t * R.row(i);
    p.A.block(i, K, 1, K) = -t * I.row(i);
    p.A(i, 2 * K + i) = 1.0;
    p.b[i] = 1.0;
    // xi_n - Im f >= 0
    p.A.block(N + i, 0, 1, K) = -I.row(i);
    p.A.block(N + i, K, 1, K) = -R.row(i);
    p.A(N + i, 2 * K + i) = 1.0;
    // Im f + xi_n >= 0
    p.A.block(2 * N + i, 0, 1, K) = I.row(i);
    p.A.block(2 * N + i, K, 1, K) = R.row(i);
    p.A(2 * N + i, 2 * K + i) = 1.0;
    // xi_n >= 0
    p.A(3 * N + i, 2 * K + i) = 1.0;
  }

  QPOptions opt;
  opt.tolerance = cfg.qp_tolerance;
  QPSolution sol = solve_qp(p, opt);
  require_converged(sol);

  Eigen::VectorXcd a(K);
  for (int k = 0; k < K; ++k) a[k] = cx(sol.x[k], sol.x[K + k]);
  Eigen::VectorXd xi = sol.x.tail(N);
  Eigen::VectorXd duals = sol.lambda.head(N);
  return package(std::move(fs), std::move(a), std::move(sol), std::move(xi),
                 std::move(duals), cfg, data);
}

TrainedModel train_real_svc(const Dataset& data,
                            std::shared_ptr<const FeatureSet> features,
                            const TrainConfig& cfg) {
  cfg.validate();
  const int N = data.n();
  if (N == 0) throw std::invalid_argument("train: empty dataset");
  const int K = features->size();

  Eigen::MatrixXd R(N, K);
  std::vector<cx> row(K);
  for (int i = 0; i < N; ++i) {
    features->eval(data.samples[i].z, row.data());
    for (int k = 0; k < K; ++k) {
      if (std::abs(row[k].imag()) > 1e-12)
        throw std::invalid_argument("train_real_svc: features not real-valued");
      R(i, k) = row[k].real();
    }
  }

  const int nv = K + N;
  QPProblem p;
  p.Q = Eigen::MatrixXd::Zero(nv, nv);
  for (int k = 0; k < K; ++k) p.Q(k, k) = features->regularized(k) ? 1.0 : 0.0;
  p.c = Eigen::VectorXd::Zero(nv);
  p.c.tail(N).setConstant(cfg.C);
  p.A = Eigen::MatrixXd::Zero(2 * N, nv);
  p.b = Eigen::VectorXd::Zero(2 * N);
  for (int i = 0; i < N; ++i) {
    p.A.block(i, 0, 1, K) = data.samples[i].t * R.row(i);
    p.A(i, K + i) = 1.0;
    p.b[i] = 1.0;
    p.A(N + i, K + i) = 1.0;
  }

  QPOptions opt;
  opt.tolerance = cfg.qp_tolerance;
  QPSolution sol = solve_qp(p, opt);
  require_converged(sol);

  Eigen::VectorXcd a(K);
  for (int k = 0; k < K; ++k) a[k] = cx(sol.x[k], 0.0);
  Eigen::VectorXd xi = sol.x.tail(N);
  Eigen::VectorXd duals = sol.lambda.head(N);
  return package(std::move(features), std::move(a), std::move(sol), std::move(xi),
                 std::move(duals), cfg, data);
}

TrainedModel train_robust(const Dataset& data, TrainConfig cfg) {
  switch (cfg.kind) {
    case FeatureKind::orthonormal: cfg.kind = FeatureKind::harmonic; break;
    case FeatureKind::ann_projected: cfg.kind = FeatureKind::ann_projected_harmonic; break;
    default: break;  // already a harmonic kind
  }
  return train_complex_svc(data, cfg);
}

Eigen::VectorXd dual_reconstruction(const TrainedModel& model, const Dataset& data) {
  const FeatureSet& fs = *model.hypothesis.features;
  const int K = fs.size(), N = data.n();
  if (model.duals.size() != N)
    throw std::invalid_argument("dual_reconstruction: dataset mismatch");
  Eigen::VectorXd w = Eigen::VectorXd::Zero(K);
  std::vector<cx> row(K);
  for (int i = 0; i < N; ++i) {
    fs.eval(data.samples[i].z, row.data());
    double c = model.duals[i] * data.samples[i].t;
    for (int k = 0; k < K; ++k) w[k] += c * row[k].real();
  }
  return w;
}

std::string model_to_csv(const TrainedModel& model) {
  std::ostringstream os;
  os << "k,re,im\n";
  for (int k = 0; k < model.hypothesis.coeffs.size(); ++k)
    os << k << ',' << fmt_double(model.hypothesis.coeffs[k].real()) << ','
       << fmt_double(model.hypothesis.coeffs[k].imag()) << '\n';
  return os.str();
}

std::string model_to_json(const TrainedModel& model) {
  std::ostringstream os;
  os << "{\n"
     << "  \"features\": \"" << model.hypothesis.features->descriptor() << "\",\n"
     << "  \"feature_kind\": \"" << to_string(model.config.kind) << "\",\n"
     << "  \"C\": " << fmt_double(model.config.C) << ",\n"
     << "  \"K\": " << model.config.K << ",\n"
     << "  \"conjugate_samples\": "
     << (model.config.conjugate_samples ? "true" : "false") << ",\n"
     << "  \"dataset\": \"" << model.dataset_fingerprint << "\",\n"
     << "  \"objective\": " << fmt_double(model.qp.objective) << ",\n"
     << "  \"training_loss\": " << fmt_double(model.training_loss()) << ",\n"
     << "  \"qp_iterations\": " << model.qp.iterations << ",\n"
     << "  \"kkt\": {\"primal\": " << fmt_double(model.qp.primal_residual)
     << ", \"dual\": " << fmt_double(model.qp.dual_residual)
     << ", \"gap\": " << fmt_double(model.qp.gap) << "}\n"
     << "}\n";
  return os.str();
}

}  // namespace holo
