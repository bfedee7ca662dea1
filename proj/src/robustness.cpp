#include "holo/robustness.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace holo {

void AttackConfig::validate() const {
  if (!(eta > 0.0) || max_iterations <= 0 || !(eps_max > 0.0) || !(bisect_tol > 0.0))
    throw std::invalid_argument("attack config: all fields must be positive");
}

namespace {

bool misclassified(const Hypothesis& h, cx z, double t) {
  double u = h(z).real();
  return u == 0.0 || sign0(u) != t;
}

cx clip_point(FeatureDomain dom, cx z, cx z0, double epsilon) {
  if (dom == FeatureDomain::unit_interval) {
    double x = std::clamp(z.real(), 0.0, 1.0);
    double lo = z0.real() - epsilon, hi = z0.real() + epsilon;
    return cx(std::clamp(x, lo, hi), 0.0);
  }
  cx d = z - z0;
  if (std::abs(d) > epsilon) z = z0 + d * (epsilon / std::abs(d));
  if (std::abs(z) > 1.0) z /= std::abs(z);
  return z;
}

}  // namespace

AttackResult gradient_attack(const Hypothesis& h, cx z0, double t,
                             const AttackConfig& cfg, double epsilon) {
  cfg.validate();
  FeatureDomain dom = h.features->domain();
  AttackResult r;
  r.z = clip_point(dom, z0, z0, epsilon);
  r.stalled = true;
  for (int it = 0; it < cfg.max_iterations; ++it) {
    if (misclassified(h, r.z, t)) {
      r.success = true;
      break;
    }
    cx g = std::conj(h.deriv(r.z));
    if (std::abs(g) > 1e-14) r.stalled = false;
    r.z = clip_point(dom, r.z - cfg.eta * t * g, z0, epsilon);
    r.iterations = it + 1;
  }
  if (!r.success) r.success = misclassified(h, r.z, t);
  r.perturbation = std::abs(r.z - z0);
  return r;
}

FlipRadius min_flip_radius(const Hypothesis& h, cx z0, double t,
                           const AttackConfig& cfg) {
  cfg.validate();
  FlipRadius out;
  if (gradient_attack(h, z0, t, cfg, 0.0).success) {
    out.radius = 0.0;
    return out;
  }
  if (!gradient_attack(h, z0, t, cfg, cfg.eps_max).success) {
    out.radius = cfg.eps_max;
    out.capped = true;
    return out;
  }
  double lo = 0.0, hi = cfg.eps_max;
  while (hi - lo > cfg.bisect_tol) {
    double mid = 0.5 * (lo + hi);
    if (gradient_attack(h, z0, t, cfg, mid).success)
      hi = mid;
    else
      lo = mid;
  }
  out.radius = hi;
  return out;
}

Crossings boundary_crossings(const Hypothesis& h, int n_angles) {
  if (n_angles < 64) throw std::invalid_argument("boundary_crossings: n_angles < 64");
  std::vector<double> th(n_angles), u(n_angles);
  std::vector<int> s(n_angles);
  for (int i = 0; i < n_angles; ++i) {
    th[i] = 2.0 * kPi * (i + 0.5) / n_angles;
    u[i] = h(std::polar(1.0, th[i])).real();
    s[i] = u[i] > 0.0 ? 1 : (u[i] < 0.0 ? -1 : 0);
  }
  Crossings c;
  int first = -1;
  for (int i = 0; i < n_angles && first < 0; ++i)
    if (s[i] != 0) first = i;
  if (first < 0) return c;  // identically zero on the samples
  // carry the last nonzero sign through exact zeros, cyclically
  for (int k = 1; k < n_angles; ++k) {
    int i = (first + k) % n_angles;
    if (s[i] == 0) s[i] = s[(i + n_angles - 1) % n_angles];
  }
  for (int i = 0; i < n_angles; ++i) {
    int j = (i + 1) % n_angles;
    if (s[i] == s[j]) continue;
    double t0 = th[i], t1 = th[j] + (j == 0 ? 2.0 * kPi : 0.0);
    double a = u[i], b = u[j];
    for (int k = 0; k < 30; ++k) {
      if (std::abs(t1 - t0) < 1e-12 || a == b) break;
      double tm = t1 - b * (t1 - t0) / (b - a);  // secant
      if (!(tm > std::min(t0, t1) && tm < std::max(t0, t1))) tm = 0.5 * (t0 + t1);
      double um = h(std::polar(1.0, tm)).real();
      if (um == 0.0) {
        t1 = tm;
        break;
      }
      if ((um > 0) == (a > 0)) {
        t0 = tm;
        a = um;
      } else {
        t1 = tm;
        b = um;
      }
    }
    c.angles.push_back(std::fmod(t1, 2.0 * kPi));
    ++c.count;
  }
  return c;
}

TransferReport transfer_metrics(const TrainedModel& target,
                                const TrainedModel& surrogate,
                                const std::vector<LabeledSample>& eval_points,
                                const AttackConfig& cfg) {
  cfg.validate();
  if (eval_points.empty())
    throw std::invalid_argument("transfer_metrics: no eval points");
  const Hypothesis& ft = target.hypothesis;
  const Hypothesis& fs = surrogate.hypothesis;

  double gsum = 0.0, csum = 0.0, lsum = 0.0, l2sum = 0.0;
  int cos_n = 0, succ = 0, transferred = 0;
  for (const auto& p : eval_points) {
    double lt = std::max(0.0, 1.0 - p.t * ft(p.z).real());
    double ls = std::max(0.0, 1.0 - p.t * fs(p.z).real());
    cx gt = lt > 0.0 ? cx(-p.t) * std::conj(ft.deriv(p.z)) : cx(0.0);
    cx gs = ls > 0.0 ? cx(-p.t) * std::conj(fs.deriv(p.z)) : cx(0.0);
    gsum += std::abs(gt);
    lsum += ls;
    l2sum += ls * ls;
    if (std::abs(gt) > 1e-14 && std::abs(gs) > 1e-14) {
      double cosang = (gt * std::conj(gs)).real() / (std::abs(gt) * std::abs(gs));
      csum += 1.0 - cosang;
      ++cos_n;
    }
    AttackResult ar = gradient_attack(fs, p.z, p.t, cfg, cfg.eps_max);
    if (ar.success) {
      ++succ;
      if (misclassified(ft, ar.z, p.t)) ++transferred;
    }
  }
  if (cos_n == 0)
    throw std::runtime_error("transfer_metrics: undefined-metric, all gradients vanish");

  TransferReport rep;
  rep.points = static_cast<int>(eval_points.size());
  rep.grad_norm_target = gsum / rep.points;
  rep.grad_cosine_distance = csum / cos_n;
  double mean = lsum / rep.points;
  rep.loss_variance_surrogate = std::max(0.0, l2sum / rep.points - mean * mean);
  rep.surrogate_successes = succ;
  rep.transfer_rate = succ > 0 ? static_cast<double>(transferred) / succ : 0.0;
  return rep;
}

NormalityReport normality_probe(const std::function<Hypothesis(int)>& rule,
                                const std::vector<int>& n_schedule,
                                int reference_n, const std::vector<cx>& grid,
                                ProbeMode mode,
                                const std::function<double(cx)>& labeler) {
  if (n_schedule.empty()) throw std::invalid_argument("normality_probe: empty schedule");
  for (std::size_t i = 1; i < n_schedule.size(); ++i)
    if (n_schedule[i] <= n_schedule[i - 1])
      throw std::invalid_argument("normality_probe: schedule not increasing");
  if (grid.empty()) throw std::invalid_argument("normality_probe: empty grid");
  if (mode == ProbeMode::vs_labeler && !labeler)
    throw std::invalid_argument("normality_probe: labeler required");
  if (mode == ProbeMode::vs_reference && reference_n < n_schedule.back())
    throw std::invalid_argument("normality_probe: reference below schedule");

  NormalityReport rep;
  Hypothesis ref;
  if (mode == ProbeMode::vs_reference) {
    ref = rule(reference_n);
    rep.reference = "trained, n=" + std::to_string(reference_n);
  } else {
    rep.reference = "labeling function";
  }

  for (int n : n_schedule) {
    Hypothesis f = (mode == ProbeMode::vs_reference && n == reference_n)
                       ? ref
                       : rule(n);
    double sup = 0.0;
    for (cx z : grid) {
      double d = mode == ProbeMode::vs_reference
                     ? std::abs(f(z) - ref(z))
                     : std::abs(f(z) - labeler(z));
      sup = std::max(sup, d);
    }
    rep.ns.push_back(n);
    rep.sup_deviation.push_back(sup);
  }
  return rep;
}

std::vector<cx> disk_eval_grid(int per_axis, double radius) {
  std::vector<cx> g;
  for (int i = 0; i < per_axis; ++i)
    for (int j = 0; j < per_axis; ++j) {
      double x = -radius + 2.0 * radius * i / (per_axis - 1);
      double y = -radius + 2.0 * radius * j / (per_axis - 1);
      if (std::hypot(x, y) <= radius) g.emplace_back(x, y);
    }
  return g;
}

std::string normality_to_csv(const NormalityReport& rep) {
  std::ostringstream os;
  os << "n,sup_deviation\n";
  for (std::size_t i = 0; i < rep.ns.size(); ++i)
    os << rep.ns[i] << ',' << fmt_double(rep.sup_deviation[i]) << '\n';
  return os.str();
}

std::string transfer_to_csv(const TransferReport& rep) {
  std::ostringstream os;
  os << "metric,value\n"
     << "grad_norm_target," << fmt_double(rep.grad_norm_target) << '\n'
     << "grad_cosine_distance," << fmt_double(rep.grad_cosine_distance) << '\n'
     << "loss_variance_surrogate," << fmt_double(rep.loss_variance_surrogate) << '\n'
     << "transfer_rate," << fmt_double(rep.transfer_rate) << '\n'
     << "surrogate_successes," << rep.surrogate_successes << '\n'
     << "points," << rep.points << '\n';
  return os.str();
}

}  // namespace holo
