#pragma once
#ifndef TRISECANT_HOMOTOPY_HPP
#define TRISECANT_HOMOTOPY_HPP

// Total-degree homotopy continuation for square polynomial systems.
//
// H(x, t) = gamma (1 - t) g(x) + t f(x),  g_i = x_i^{D_i} - r_i,
// tracked from t = 0 to t = 1 with a fourth-order Runge-Kutta predictor on
// dx/dt = -H_x^{-1} H_t and a Newton corrector at fixed t.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "trisecant/parallel.hpp"
#include "trisecant/poly.hpp"
#include "trisecant/random.hpp"

namespace trisecant {

struct TrackerConfig {
  double initial_step = 0.05;
  double min_step = 1e-7;
  double corrector_tolerance = 1e-10;
  int max_corrector_iterations = 3;
  double divergence_norm = 1e8;
  double final_residual = 1e-12;
  double reality_threshold = 1e-8;
  double dedup_radius = 1e-6;
  int max_path_retries = 3;
  double singular_condition = 1e12;
  std::uint64_t seed = 0;
  std::size_t workers = 1;

  void validate() const {
    if (!(initial_step > 0 && min_step > 0 && corrector_tolerance > 0 && divergence_norm > 0 &&
          final_residual > 0 && reality_threshold > 0 && dedup_radius > 0 && singular_condition > 0))
      throw InputError("tracker tolerances must be positive");
    if (!(min_step < initial_step)) throw InputError("min step must be below the initial step");
    if (max_corrector_iterations < 1 || max_path_retries < 0) throw InputError("bad iteration limits");
  }
};

struct Solution {
  std::vector<Complex> coordinates;
  double residual = 0.0;
  bool is_real = false;
  bool converged = false;
  double condition = 1.0;
  std::size_t origin = 0;

  bool singular(double threshold = 1e12) const { return !(condition <= threshold); }
};

struct SolveReport {
  std::vector<Solution> solutions;
  std::size_t paths_tracked = 0;
  std::size_t paths_diverged = 0;
  std::size_t paths_failed = 0;
  std::size_t finite_endpoints = 0;  // before merging duplicates
  std::size_t real_count = 0;
  std::size_t attempts = 0;
  bool non_transversal = false;  // some solution has condition above the threshold
};

/// Flattened polynomial system for repeated numeric evaluation.
class CompiledSystem {
 public:
  explicit CompiledSystem(const PolySystem<Complex>& sys) : vars_(sys.num_vars()) {
    for (const auto& f : sys.equations()) {
      std::vector<Term> terms;
      for (const auto& [e, c] : f.terms()) {
        terms.push_back({c, e});
        for (auto k : e) max_exp_ = std::max(max_exp_, k);
      }
      eqs_.push_back(std::move(terms));
    }
  }

  std::size_t num_equations() const { return eqs_.size(); }
  std::size_t num_vars() const { return vars_; }

  /// Values, Jacobian and per-equation magnitude scale sum |c x^a|.
  void evaluate(const Eigen::VectorXcd& x, Eigen::VectorXcd& f, Eigen::MatrixXcd* jac = nullptr,
                std::vector<double>* scale = nullptr) const {
    const std::size_t n = vars_;
    std::vector<Complex> pw(n * (max_exp_ + 1));
    for (std::size_t v = 0; v < n; ++v) {
      pw[v * (max_exp_ + 1)] = 1.0;
      for (unsigned k = 1; k <= max_exp_; ++k) pw[v * (max_exp_ + 1) + k] = pw[v * (max_exp_ + 1) + k - 1] * x[static_cast<Eigen::Index>(v)];
    }
    auto power = [&](std::size_t v, unsigned k) { return pw[v * (max_exp_ + 1) + k]; };
    f.setZero(static_cast<Eigen::Index>(eqs_.size()));
    if (jac) jac->setZero(static_cast<Eigen::Index>(eqs_.size()), static_cast<Eigen::Index>(n));
    if (scale) scale->assign(eqs_.size(), 0.0);
    for (std::size_t i = 0; i < eqs_.size(); ++i) {
      const auto row = static_cast<Eigen::Index>(i);
      for (const auto& t : eqs_[i]) {
        Complex mono = t.coeff;
        for (std::size_t v = 0; v < n; ++v)
          if (t.exp[v]) mono *= power(v, t.exp[v]);
        f[row] += mono;
        if (scale) (*scale)[i] += std::abs(mono);
        if (!jac) continue;
        for (std::size_t j = 0; j < n; ++j) {
          if (t.exp[j] == 0) continue;
          Complex d = t.coeff * static_cast<double>(t.exp[j]);
          for (std::size_t v = 0; v < n; ++v) {
            const unsigned k = (v == j) ? t.exp[v] - 1 : t.exp[v];
            if (k) d *= power(v, k);
          }
          (*jac)(row, static_cast<Eigen::Index>(j)) += d;
        }
      }
    }
  }

 private:
  struct Term {
    Complex coeff;
    Exponent exp;
  };
  std::size_t vars_;
  unsigned max_exp_ = 0;
  std::vector<std::vector<Term>> eqs_;
};

namespace detail {

inline double inf_norm(const Eigen::VectorXcd& v) {
  double m = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) m = std::max(m, std::abs(v[i]));
  return m;
}

inline Eigen::VectorXcd to_eigen(std::span<const Complex> x) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(x.size()));
  for (std::size_t i = 0; i < x.size(); ++i) v[static_cast<Eigen::Index>(i)] = x[i];
  return v;
}

inline std::vector<Complex> from_eigen(const Eigen::VectorXcd& v) {
  return std::vector<Complex>(v.data(), v.data() + v.size());
}

inline double condition_number(const Eigen::MatrixXcd& jac) {
  if (jac.size() == 0) return 1.0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(jac);
  const auto& s = svd.singularValues();
  const double lo = s[s.size() - 1];
  if (!(lo > 0.0)) return std::numeric_limits<double>::infinity();
  return s[0] / lo;
}

/// Normalized residual: max_i |f_i(x)| / max(1, sum |c x^a|).
inline double residual(const CompiledSystem& sys, const Eigen::VectorXcd& x) {
  Eigen::VectorXcd f;
  std::vector<double> scale;
  sys.evaluate(x, f, nullptr, &scale);
  double r = 0.0;
  for (Eigen::Index i = 0; i < f.size(); ++i)
    r = std::max(r, std::abs(f[i]) / std::max(1.0, scale[static_cast<std::size_t>(i)]));
  return r;
}

}  // namespace detail

/// Reality test: max |Im| strictly below tau * (1 + max |Re|).
inline bool is_real_point(std::span<const Complex> coords, double tau) {
  double max_im = 0.0;
  double max_re = 0.0;
  for (const auto& z : coords) {
    max_im = std::max(max_im, std::abs(z.imag()));
    max_re = std::max(max_re, std::abs(z.real()));
  }
  return max_im < tau * (1.0 + max_re);
}

/// Newton refinement of a point of a square system f = 0.
inline Solution refine(std::span<const Complex> point, const CompiledSystem& sys, const TrackerConfig& cfg) {
  if (point.size() != sys.num_vars()) throw InputError("point length does not match variable count");
  Eigen::VectorXcd x = detail::to_eigen(point);
  Eigen::VectorXcd f;
  Eigen::MatrixXcd jac;
  constexpr int kMaxIterations = 30;
  constexpr double kEps = std::numeric_limits<double>::epsilon();
  int small_steps = 0;
  for (int it = 0; it < kMaxIterations; ++it) {
    sys.evaluate(x, f, &jac);
    if (!f.allFinite() || !jac.allFinite()) break;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(jac);
    if (!(lu.rcond() > 1e-300)) break;
    const Eigen::VectorXcd dx = lu.solve(f);
    if (!dx.allFinite()) break;
    x -= dx;
    if (detail::inf_norm(dx) <= 8 * kEps * (1.0 + detail::inf_norm(x))) {
      if (++small_steps >= 2) break;
    }
  }
  Solution s;
  s.coordinates = detail::from_eigen(x);
  s.residual = x.allFinite() ? detail::residual(sys, x) : std::numeric_limits<double>::infinity();
  s.converged = s.residual <= cfg.final_residual;
  if (x.allFinite()) {
    sys.evaluate(x, f, &jac);
    s.condition = detail::condition_number(jac);
  } else {
    s.condition = std::numeric_limits<double>::infinity();
  }
  s.is_real = false;
  return s;
}

inline Solution refine(std::span<const Complex> point, const PolySystem<Complex>& sys, const TrackerConfig& cfg) {
  return refine(point, CompiledSystem(sys), cfg);
}

/// Marks a refined solution real when it passes the reality test and its
/// real projection re-converges; the coordinates become exactly real then.
inline bool classify_real(Solution& sol, const CompiledSystem& sys, const TrackerConfig& cfg) {
  sol.is_real = false;
  if (!sol.converged || !is_real_point(sol.coordinates, cfg.reality_threshold)) return false;
  std::vector<Complex> projected;
  for (const auto& z : sol.coordinates) projected.emplace_back(z.real(), 0.0);
  Solution again = refine(projected, sys, cfg);
  if (!again.converged || !is_real_point(again.coordinates, cfg.reality_threshold)) return false;
  for (auto& z : again.coordinates) z = {z.real(), 0.0};
  again.origin = sol.origin;
  again.is_real = true;
  sol = std::move(again);
  return true;
}

inline bool classify_real(Solution& sol, const PolySystem<Complex>& sys, const TrackerConfig& cfg) {
  return classify_real(sol, CompiledSystem(sys), cfg);
}

namespace detail {

enum class PathOutcome { finite, diverged, failed };

struct PathResult {
  PathOutcome outcome = PathOutcome::failed;
  Eigen::VectorXcd endpoint;
};

class TotalDegreeHomotopy {
 public:
  TotalDegreeHomotopy(const CompiledSystem& target, std::vector<unsigned> degrees, std::vector<Complex> constants)
      : target_(target), degrees_(std::move(degrees)), constants_(std::move(constants)) {}

  /// H, H_x and H_t at (x, t).
  void evaluate(const Eigen::VectorXcd& x, double t, Complex gamma, Eigen::VectorXcd& h, Eigen::MatrixXcd& hx,
                Eigen::VectorXcd& ht) const {
    Eigen::VectorXcd f;
    Eigen::MatrixXcd jf;
    target_.evaluate(x, f, &jf);
    const auto n = x.size();
    Eigen::VectorXcd g(n);
    Eigen::VectorXcd dg(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const unsigned d = degrees_[static_cast<std::size_t>(i)];
      const Complex xd1 = std::pow(x[i], static_cast<int>(d - 1));
      g[i] = xd1 * x[i] - constants_[static_cast<std::size_t>(i)];
      dg[i] = static_cast<double>(d) * xd1;
    }
    const Complex a = gamma * (1.0 - t);
    h = a * g + t * f;
    hx = t * jf;
    for (Eigen::Index i = 0; i < n; ++i) hx(i, i) += a * dg[i];
    ht = f - gamma * g;
  }

  bool velocity(const Eigen::VectorXcd& x, double t, Complex gamma, Eigen::VectorXcd& v) const {
    Eigen::VectorXcd h, ht;
    Eigen::MatrixXcd hx;
    evaluate(x, t, gamma, h, hx, ht);
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(hx);
    if (!(lu.rcond() > 1e-14)) return false;
    v = -lu.solve(ht);
    return v.allFinite();
  }

  bool correct(Eigen::VectorXcd& x, double t, Complex gamma, const TrackerConfig& cfg) const {
    Eigen::VectorXcd h, ht;
    Eigen::MatrixXcd hx;
    for (int it = 0; it < cfg.max_corrector_iterations; ++it) {
      evaluate(x, t, gamma, h, hx, ht);
      Eigen::PartialPivLU<Eigen::MatrixXcd> lu(hx);
      if (!(lu.rcond() > 1e-14)) return false;
      const Eigen::VectorXcd dx = lu.solve(h);
      if (!dx.allFinite()) return false;
      x -= dx;
      if (inf_norm(dx) <= cfg.corrector_tolerance * (1.0 + inf_norm(x))) return true;
    }
    return false;
  }

  PathResult track(Eigen::VectorXcd x, Complex gamma, const TrackerConfig& cfg) const {
    double t = 0.0;
    double step = cfg.initial_step;
    int successes = 0;
    Eigen::VectorXcd k1, k2, k3, k4;
    while (t < 1.0) {
      const double h = std::min(step, 1.0 - t);
      bool ok = velocity(x, t, gamma, k1) && velocity(x + 0.5 * h * k1, t + 0.5 * h, gamma, k2) &&
                velocity(x + 0.5 * h * k2, t + 0.5 * h, gamma, k3) && velocity(x + h * k3, t + h, gamma, k4);
      Eigen::VectorXcd trial;
      if (ok) {
        trial = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        ok = trial.allFinite() && correct(trial, t + h, gamma, cfg);
      }
      if (ok) {
        x = trial;
        t = (h == 1.0 - t) ? 1.0 : t + h;
        if (inf_norm(x) > cfg.divergence_norm) return {PathOutcome::diverged, x};
        if (++successes >= 5) {
          step = std::min(2.0 * step, cfg.initial_step);
          successes = 0;
        }
      } else {
        step *= 0.5;
        successes = 0;
        if (step < cfg.min_step) return {t > 0.99 ? PathOutcome::diverged : PathOutcome::failed, x};
      }
    }
    return {PathOutcome::finite, x};
  }

 private:
  const CompiledSystem& target_;
  std::vector<unsigned> degrees_;
  std::vector<Complex> constants_;
};

constexpr std::uint64_t kGammaSalt = 0x6761;
constexpr std::uint64_t kStartSalt = 0x7374;
constexpr std::uint64_t kRetrySalt = 0x7274;

}  // namespace detail

/// All isolated solutions of a square system by total-degree homotopy.
inline SolveReport solve_square(const PolySystem<Complex>& sys, const TrackerConfig& cfg) {
  cfg.validate();
  const std::size_t n = sys.num_vars();
  if (sys.size() != n) throw InputError("system is not square");
  if (n == 0) throw InputError("system has no variables");
  std::vector<unsigned> degrees;
  for (const auto& f : sys.equations()) {
    const unsigned d = f.total_degree();
    if (d == 0) throw InputError("system contains a constant equation");
    degrees.push_back(d);
  }
  const CompiledSystem target(sys);

  Rng start_rng(derive_seed(cfg.seed, 0, detail::kStartSalt));
  std::vector<Complex> constants;
  for (std::size_t i = 0; i < n; ++i) constants.push_back(start_rng.unit_complex());
  const detail::TotalDegreeHomotopy homotopy(target, degrees, constants);

  std::size_t total_paths = 1;
  for (auto d : degrees) total_paths *= d;

  auto start_point = [&](std::size_t path) {
    Eigen::VectorXcd x(static_cast<Eigen::Index>(n));
    std::size_t rest = path;
    for (std::size_t i = 0; i < n; ++i) {
      const unsigned d = degrees[i];
      const std::size_t k = rest % d;
      rest /= d;
      const double theta = (std::arg(constants[i]) + 2.0 * std::numbers::pi * static_cast<double>(k)) / d;
      x[static_cast<Eigen::Index>(i)] = std::polar(1.0, theta);
    }
    return x;
  };

  SolveReport best;
  for (int attempt = 0; attempt <= cfg.max_path_retries; ++attempt) {
    const Complex gamma = Rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(attempt), detail::kGammaSalt)).unit_complex();
    std::vector<detail::PathResult> results(total_paths);
    std::vector<Solution> refined(total_paths);
    parallel_for(total_paths, cfg.workers, [&](std::size_t p) {
      Complex g = gamma;
      for (int retry = 0; retry <= cfg.max_path_retries; ++retry) {
        if (retry > 0)
          g = Rng(derive_seed(cfg.seed, p * 64 + static_cast<std::size_t>(retry) * 8 + static_cast<std::size_t>(attempt),
                              detail::kRetrySalt))
                  .unit_complex();
        detail::PathResult r = homotopy.track(start_point(p), g, cfg);
        if (r.outcome == detail::PathOutcome::finite) {
          Solution s = refine(detail::from_eigen(r.endpoint), target, cfg);
          if (!s.converged) {
            r.outcome = detail::PathOutcome::failed;
          } else {
            s.origin = p;
            refined[p] = std::move(s);
          }
        }
        results[p] = std::move(r);
        if (results[p].outcome != detail::PathOutcome::failed) break;
      }
    });

    SolveReport report;
    report.paths_tracked = total_paths;
    report.attempts = static_cast<std::size_t>(attempt) + 1;
    bool collision = false;
    for (std::size_t p = 0; p < total_paths; ++p) {
      switch (results[p].outcome) {
        case detail::PathOutcome::diverged: ++report.paths_diverged; continue;
        case detail::PathOutcome::failed: ++report.paths_failed; continue;
        case detail::PathOutcome::finite: break;
      }
      ++report.finite_endpoints;
      Solution& s = refined[p];
      const Eigen::VectorXcd xs = detail::to_eigen(s.coordinates);
      bool duplicate = false;
      for (const auto& other : report.solutions) {
        const Eigen::VectorXcd xo = detail::to_eigen(other.coordinates);
        if (detail::inf_norm(xs - xo) <= cfg.dedup_radius * (1.0 + detail::inf_norm(xo))) {
          duplicate = true;
          break;
        }
      }
      if (duplicate) {
        collision = true;
        continue;
      }
      classify_real(s, target, cfg);
      if (s.singular(cfg.singular_condition)) report.non_transversal = true;
      report.solutions.push_back(s);
    }
    for (const auto& s : report.solutions) report.real_count += s.is_real ? 1 : 0;
    best = std::move(report);
    if (!collision && best.paths_failed == 0) break;
  }
  return best;
}

}  // namespace trisecant

#endif  // TRISECANT_HOMOTOPY_HPP
