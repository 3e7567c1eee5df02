#pragma once
#ifndef TRISECANT_TRICHOTOMY_HPP
#define TRISECANT_TRICHOTOMY_HPP

// Monte Carlo experiments: spans of random real points on a Segre-Veronese
// variety (trisecant trichotomy), real-count sets of complementary sections,
// ICA identifiability and typical ranks.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "trisecant/constructions.hpp"
#include "trisecant/parallel.hpp"
#include "trisecant/variety.hpp"

namespace trisecant {

struct WilsonInterval {
  double low = 0.0;
  double high = 1.0;
};

/// 95% Wilson score interval.
inline WilsonInterval wilson_interval(std::size_t successes, std::size_t trials) {
  if (trials == 0) return {0.0, 1.0};
  constexpr double z = 1.959964;
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double denom = 1.0 + z * z / n;
  const double center = (p + z * z / (2 * n)) / denom;
  const double half = z / denom * std::sqrt(p * (1 - p) / n + z * z / (4 * n * n));
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

/// Rounded for stable text output.
inline double round_sig(double x) {
  std::ostringstream s;
  s.precision(12);
  s << x;
  return std::stod(s.str());
}

inline Json to_json(const WilsonInterval& w) { return Json::array({round_sig(w.low), round_sig(w.high)}); }

enum class TrichotomyCase { a, b, c };

inline char case_letter(TrichotomyCase c) { return c == TrichotomyCase::a ? 'a' : c == TrichotomyCase::b ? 'b' : 'c'; }

/// (a) n + M < N; (b) n + M = N with deg = n mod 2; (c) otherwise.
inline TrichotomyCase classify_case(const VarietySpec& spec, std::size_t n) {
  const std::size_t big_n = spec.ambient_dim();
  const std::size_t sum = n + spec.dim();
  if (sum < big_n) return TrichotomyCase::a;
  if (sum == big_n && spec.degree() % 2 == n % 2) return TrichotomyCase::b;
  return TrichotomyCase::c;
}

constexpr double kRecoveryTolerance = 1e-8;
constexpr int kMaxTrialResamples = 16;

struct TrialRecord {
  std::size_t index = 0;
  std::uint64_t seed = 0;  // seed of the accepted sample
  TrichotomyCase label = TrichotomyCase::a;
  bool solved = false;
  std::size_t raw_real = 0;
  std::size_t real = 0;
  std::size_t total = 0;
  bool recovered = false;  // every spanning point is a real solution
  bool exact = false;      // real solutions are exactly the spanning points
  bool transversal = false;
  std::size_t degenerate_resamples = 0;
  std::size_t failed_resamples = 0;
};

namespace detail {

inline bool spanning_points_recovered(const std::vector<ParamPoint>& pts, const IntersectReport& r) {
  for (const auto& p : pts) {
    bool hit = false;
    for (const auto& q : r.points)
      if (q.is_real && projective_distance(p, q.point) <= kRecoveryTolerance) {
        hit = true;
        break;
      }
    if (!hit) return false;
  }
  return true;
}

inline TrackerConfig trial_config(const TrackerConfig& cfg, std::uint64_t seed) {
  TrackerConfig c = cfg;
  c.seed = seed;
  c.workers = 1;  // parallelism is across trials
  return c;
}

/// Samples real points with `draw`, spans, intersects; resamples degenerate
/// spans and non-transversal solves.
template <class Draw>
TrialRecord run_span_trial(const VarietySpec& spec, std::size_t n, std::size_t index, std::uint64_t master,
                           std::uint64_t salt, const TrackerConfig& cfg, Draw&& draw) {
  TrialRecord rec;
  rec.index = index;
  rec.label = classify_case(spec, n);
  for (int attempt = 0; attempt < kMaxTrialResamples; ++attempt) {
    const std::uint64_t seed = derive_seed(derive_seed(master, index, salt), static_cast<std::uint64_t>(attempt));
    rec.seed = seed;
    const std::vector<ParamPoint> pts = draw(seed);
    if (n + spec.dim() > spec.ambient_dim()) return rec;  // positive-dimensional; not solved
    LinearSection sec;
    try {
      sec = span_section(spec, pts);
    } catch (const DegenerateSpan&) {
      ++rec.degenerate_resamples;
      continue;
    }
    const IntersectReport r = intersect(sec, trial_config(cfg, derive_seed(seed, 1)));
    if (!r.transversal) {
      ++rec.failed_resamples;
      continue;
    }
    rec.solved = true;
    rec.transversal = true;
    rec.raw_real = r.raw_real_count;
    rec.real = r.real_count;
    rec.total = r.count;
    rec.recovered = spanning_points_recovered(pts, r);
    rec.exact = rec.recovered && rec.real == n;
    return rec;
  }
  return rec;
}

inline Json trial_summary(const VarietySpec& spec, std::size_t n, const std::vector<TrialRecord>& trials,
                          const std::string& success_key) {
  std::size_t transversal = 0, exact = 0, recovered = 0, degenerate = 0, failed = 0, parity = 0, bound = 0;
  std::map<std::size_t, std::size_t> tally;
  const std::size_t deg = spec.degree();
  for (const auto& t : trials) {
    degenerate += t.degenerate_resamples;
    failed += t.failed_resamples;
    if (!t.transversal) continue;
    ++transversal;
    exact += t.exact ? 1 : 0;
    recovered += t.recovered ? 1 : 0;
    ++tally[t.real];
    // the squared-up case counts only points on the section, which may be fewer than deg
    if (t.total == deg && t.real % 2 != deg % 2) ++parity;
    if (t.real > deg) ++bound;
  }
  Json j;
  j["spec"] = to_json(spec);
  j["n"] = n;
  j["ambient"] = spec.ambient_dim();
  j["dim"] = spec.dim();
  j["degree"] = deg;
  j["case"] = std::string(1, case_letter(classify_case(spec, n)));
  j["trials"] = trials.size();
  j["transversal_trials"] = transversal;
  j[success_key] = exact;
  j["spanning_points_recovered"] = recovered;
  if (transversal > 0) {
    j["probability"] = round_sig(static_cast<double>(exact) / static_cast<double>(transversal));
    j["wilson95"] = to_json(wilson_interval(exact, transversal));
  } else {
    j["probability"] = nullptr;
    j["wilson95"] = nullptr;
  }
  Json t = Json::object();
  for (const auto& [k, v] : tally) t[std::to_string(k)] = v;
  j["real_count_tally"] = std::move(t);
  j["degenerate_resamples"] = degenerate;
  j["nontransversal_resamples"] = failed;
  j["parity_violations"] = parity;
  j["bound_violations"] = bound;
  return j;
}

}  // namespace detail

struct TrichotomyResult {
  std::vector<TrialRecord> trials;
  Json summary;
};

inline std::string trials_csv(const std::vector<TrialRecord>& trials) {
  std::ostringstream out;
  out << "trial,seed,case,solved,transversal,raw_real,real,total,recovered,exact,degenerate_resamples,failed_resamples\n";
  for (const auto& t : trials)
    out << t.index << ',' << t.seed << ',' << case_letter(t.label) << ',' << t.solved << ',' << t.transversal << ','
        << t.raw_real << ',' << t.real << ',' << t.total << ',' << t.recovered << ',' << t.exact << ','
        << t.degenerate_resamples << ',' << t.failed_resamples << '\n';
  return out.str();
}

inline TrichotomyResult run_trichotomy(const VarietySpec& spec, std::size_t n, std::size_t trials, const TrackerConfig& cfg) {
  spec.validate();
  if (n < 1 || n > spec.ambient_dim()) throw InputError("n must lie in [1, N]");
  TrichotomyResult res;
  res.trials.resize(trials);
  parallel_for(trials, cfg.workers, [&](std::size_t t) {
    res.trials[t] = detail::run_span_trial(spec, n, t, cfg.seed, 0x7472, cfg, [&](std::uint64_t seed) {
      std::vector<ParamPoint> pts;
      for (std::size_t k = 0; k < n; ++k) pts.push_back(sample_real_point(spec, derive_seed(seed, k, 0x7074)));
      return pts;
    });
  });
  res.summary = detail::trial_summary(spec, n, res.trials, "exact_recoveries");
  if (classify_case(spec, n) == TrichotomyCase::c && n + spec.dim() > spec.ambient_dim())
    res.summary["reason"] = "n + dim X > N: the span meets X in a positive-dimensional set; not solved";
  else if (classify_case(spec, n) == TrichotomyCase::c)
    res.summary["reason"] = "n + dim X = N with deg X and n of different parity: an extra real point is forced";
  return res;
}

struct NEstimate {
  VarietySpec spec;
  std::map<std::size_t, std::size_t> tally;          // sampled real counts
  std::map<std::size_t, std::string> witnesses;      // count -> construction kind
  std::size_t transversal_trials = 0;
  std::size_t resamples = 0;

  std::vector<std::size_t> achieved() const {
    std::map<std::size_t, bool> s;
    for (const auto& [k, v] : tally) s[k] = true;
    for (const auto& [k, v] : witnesses) s[k] = true;
    std::vector<std::size_t> out;
    for (const auto& [k, v] : s) out.push_back(k);
    return out;
  }
};

/// Verified constructions that apply to the spec.
inline std::vector<ConstructedSystem> applicable_witnesses(const VarietySpec& spec, std::uint64_t seed) {
  std::vector<ConstructedSystem> out;
  out.push_back(build_max_real(spec, derive_seed(seed, 0, 0x7769)));
  for (std::size_t i = 0; i < spec.factors(); ++i)
    if (spec.d[i] % 2 == 0) {
      out.push_back(build_min_even(spec, i, derive_seed(seed, 1, 0x7769)));
      return out;
    }
  try {
    out.push_back(build_min_odd(spec, derive_seed(seed, 2, 0x7769)));
  } catch (const InputError&) {
    if (spec.factors() == 2 && spec.m[0] == 1 && spec.d == std::vector<unsigned>{1, 1} && spec.m[1] % 2 == 0)
      out.push_back(build_segre1n_even(spec.m[1], derive_seed(seed, 3, 0x7769)));
  }
  return out;
}

inline NEstimate estimate_N(const VarietySpec& spec, std::size_t trials, const TrackerConfig& cfg, bool witnesses = true) {
  spec.validate();
  NEstimate est;
  est.spec = spec;
  std::vector<std::optional<std::size_t>> counts(trials);
  std::vector<std::size_t> resamples(trials, 0);
  parallel_for(trials, cfg.workers, [&](std::size_t t) {
    for (int attempt = 0; attempt < kMaxTrialResamples; ++attempt) {
      const std::uint64_t seed = derive_seed(derive_seed(cfg.seed, t, 0x6e73), static_cast<std::uint64_t>(attempt));
      const IntersectReport r = intersect(random_complementary_section(spec, seed), detail::trial_config(cfg, derive_seed(seed, 1)));
      if (!r.transversal) {
        ++resamples[t];
        continue;
      }
      counts[t] = r.real_count;
      return;
    }
  });
  for (std::size_t t = 0; t < trials; ++t) {
    est.resamples += resamples[t];
    if (!counts[t]) continue;
    ++est.transversal_trials;
    ++est.tally[*counts[t]];
  }
  if (witnesses) {
    for (const auto& w : applicable_witnesses(spec, cfg.seed)) {
      const VerifyReport v = verify_construction(w, detail::trial_config(cfg, derive_seed(cfg.seed, 9, 0x7677)));
      if (v.passed) est.witnesses.emplace(w.expected_real, to_string(w.kind));
    }
  }
  return est;
}

inline Json to_json(const NEstimate& e) {
  Json j;
  const std::size_t deg = e.spec.degree();
  j["spec"] = to_json(e.spec);
  j["degree"] = deg;
  j["transversal_trials"] = e.transversal_trials;
  j["nontransversal_resamples"] = e.resamples;
  Json t = Json::object();
  for (const auto& [k, v] : e.tally) t[std::to_string(k)] = v;
  j["real_count_tally"] = std::move(t);
  Json w = Json::object();
  for (const auto& [k, v] : e.witnesses) w[std::to_string(k)] = v;
  j["witnesses"] = std::move(w);
  const auto achieved = e.achieved();
  j["achieved"] = achieved;
  std::size_t parity = 0, bound = 0;
  for (auto k : achieved) {
    parity += (k % 2 != deg % 2) ? 1 : 0;
    bound += (k > deg) ? 1 : 0;
  }
  j["parity_violations"] = parity;
  j["bound_violations"] = bound;
  bool interval = !achieved.empty();
  for (std::size_t k = achieved.empty() ? 0 : achieved.front(); interval && k <= achieved.back(); k += 2)
    interval = std::find(achieved.begin(), achieved.end(), k) != achieved.end();
  j["parity_interval"] = interval;
  return j;
}

/// Second Veronese of P^{I-1}; columns of a Gaussian I x J matrix as points.
inline TrichotomyResult ica_identifiability(unsigned big_i, std::size_t big_j, std::size_t trials, const TrackerConfig& cfg) {
  if (big_i < 2) throw InputError("ICA needs I >= 2");
  const std::size_t limit = big_i * (big_i - 1) / 2 + 1;
  if (big_j < 1 || big_j > limit) throw InputError("ICA needs 1 <= J <= C(I,2) + 1");
  const VarietySpec spec({big_i - 1}, {2});
  TrichotomyResult res;
  res.trials.resize(trials);
  parallel_for(trials, cfg.workers, [&](std::size_t t) {
    res.trials[t] = detail::run_span_trial(spec, big_j, t, cfg.seed, 0x6963, cfg, [&](std::uint64_t seed) {
      Rng rng(seed);
      std::vector<ParamPoint> cols;
      for (std::size_t k = 0; k < big_j; ++k) {
        ParamPoint p;
        std::vector<Complex> a;
        for (unsigned r = 0; r < big_i; ++r) a.emplace_back(rng.normal(), 0.0);
        p.blocks.push_back(std::move(a));
        cols.push_back(gauge(std::move(p)));
      }
      // collinear columns give a degenerate span and are resampled there
      return cols;
    });
  });
  res.summary = detail::trial_summary(spec, big_j, res.trials, "identifiable");
  res.summary["I"] = big_i;
  res.summary["J"] = big_j;
  return res;
}

struct TypicalRankResult {
  std::vector<std::size_t> real_counts;  // per trial; deg + 1 marks a discarded trial
  Json summary;
};

/// Span of ell Gaussian slices; rank ell needs at least ell real points of X in it.
inline TypicalRankResult typical_rank_experiment(const VarietySpec& spec, std::size_t ell, std::size_t trials,
                                                 const TrackerConfig& cfg) {
  spec.validate();
  const std::size_t big_n = spec.ambient_dim();
  if (ell + spec.dim() != big_n)
    throw InputError("only ell = N - dim X gives a finite intersection with the slice span (ell = " +
                     std::to_string(big_n - spec.dim()) + " here)");
  const std::size_t deg = spec.degree();
  TypicalRankResult res;
  res.real_counts.assign(trials, deg + 1);
  parallel_for(trials, cfg.workers, [&](std::size_t t) {
    for (int attempt = 0; attempt < kMaxTrialResamples; ++attempt) {
      const std::uint64_t seed = derive_seed(derive_seed(cfg.seed, t, 0x7472), static_cast<std::uint64_t>(attempt));
      Rng rng(seed);
      Eigen::MatrixXd slices(static_cast<Eigen::Index>(ell), static_cast<Eigen::Index>(big_n));
      for (Eigen::Index r = 0; r < slices.rows(); ++r)
        for (Eigen::Index c = 0; c < slices.cols(); ++c) slices(r, c) = rng.normal();
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(slices, Eigen::ComputeFullV);
      const auto& s = svd.singularValues();
      if (!(s[s.size() - 1] > kSpanRankTolerance * s[0])) continue;
      const Eigen::MatrixXd forms = svd.matrixV().rightCols(static_cast<Eigen::Index>(big_n - ell)).transpose();
      const IntersectReport r = intersect(section_from_forms(spec, forms), detail::trial_config(cfg, derive_seed(seed, 1)));
      if (!r.transversal) continue;
      res.real_counts[t] = r.real_count;
      return;
    }
  });
  std::size_t valid = 0, rank_ell = 0;
  std::map<std::size_t, std::size_t> tally;
  for (auto c : res.real_counts) {
    if (c > deg) continue;
    ++valid;
    ++tally[c];
    if (c >= ell) ++rank_ell;
  }
  Json j;
  j["spec"] = to_json(spec);
  j["ell"] = ell;
  j["degree"] = deg;
  j["trials"] = trials;
  j["transversal_trials"] = valid;
  j["rank_ell_events"] = rank_ell;
  j["rank_ell_plus_1_events"] = valid - rank_ell;
  if (valid > 0) {
    j["rank_ell_plus_1_frequency"] = round_sig(static_cast<double>(valid - rank_ell) / static_cast<double>(valid));
    j["wilson95"] = to_json(wilson_interval(valid - rank_ell, valid));
  } else {
    j["rank_ell_plus_1_frequency"] = nullptr;
    j["wilson95"] = nullptr;
  }
  Json t = Json::object();
  for (const auto& [k, v] : tally) t[std::to_string(k)] = v;
  j["real_count_tally"] = std::move(t);
  j["typical_ranks_observed"] = Json::array();
  if (rank_ell > 0) j["typical_ranks_observed"].push_back(ell);
  if (valid > rank_ell) j["typical_ranks_observed"].push_back(ell + 1);
  res.summary = std::move(j);
  return res;
}

}  // namespace trisecant

#endif  // TRISECANT_TRICHOTOMY_HPP
