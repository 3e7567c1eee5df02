#pragma once
#ifndef TRISECANT_CLI_HPP
#define TRISECANT_CLI_HPP

#include <algorithm>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "trisecant/constructions.hpp"
#include "trisecant/dual_scan.hpp"
#include "trisecant/trichotomy.hpp"
#include "trisecant/variety.hpp"

#ifndef TRISECANT_VERSION
#define TRISECANT_VERSION "0.1.0"
#endif

namespace trisecant {

/// Thrown by subcommands whose checked property does not hold (exit 1).
class AssertionFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

constexpr std::uint64_t kDefaultSeed = 1;

namespace cli {

struct Common {
  std::uint64_t seed = kDefaultSeed;
  std::size_t workers = 0;  // 0: available parallelism
  std::string out;
  TrackerConfig tracker;
};

inline void add_common(CLI::App* sub, Common& c, bool tracker) {
  sub->add_option("--seed", c.seed, "master seed")->envname("TRISECANT_SEED");
  sub->add_option("--workers", c.workers, "worker threads, 0 = available parallelism");
  sub->add_option("--out", c.out, "output file (default stdout)");
  if (!tracker) return;
  sub->add_option("--initial-step", c.tracker.initial_step);
  sub->add_option("--min-step", c.tracker.min_step);
  sub->add_option("--corrector-tol", c.tracker.corrector_tolerance);
  sub->add_option("--corrector-iters", c.tracker.max_corrector_iterations);
  sub->add_option("--divergence", c.tracker.divergence_norm);
  sub->add_option("--final-residual", c.tracker.final_residual);
  sub->add_option("--reality-tau", c.tracker.reality_threshold);
  sub->add_option("--dedup", c.tracker.dedup_radius);
  sub->add_option("--retries", c.tracker.max_path_retries);
}

inline TrackerConfig tracker_of(const Common& c) {
  TrackerConfig t = c.tracker;
  t.seed = c.seed;
  t.workers = c.workers;
  t.validate();
  return t;
}

// Worker count is left out: it never changes results.
inline Json tracker_json(const TrackerConfig& t) {
  return {{"initial_step", t.initial_step},         {"min_step", t.min_step},
          {"corrector_tolerance", t.corrector_tolerance}, {"max_corrector_iterations", t.max_corrector_iterations},
          {"divergence_norm", t.divergence_norm},   {"final_residual", t.final_residual},
          {"reality_threshold", t.reality_threshold}, {"dedup_radius", t.dedup_radius},
          {"max_path_retries", t.max_path_retries}};
}

inline Json header(const std::string& sub, Json config) {
  Json j;
  j["tool"] = "trisecant";
  j["version"] = TRISECANT_VERSION;
  j["command"] = sub;
  j["config"] = std::move(config);
  return j;
}

inline VarietySpec parse_spec(const std::string& text) {
  try {
    return spec_from_json(Json::parse(text));
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("bad --spec: ") + e.what());
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot read " + path);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

inline Json parse_json_text(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError("bad JSON in " + what + ": " + e.what());
  }
}

/// Writes to --out or the given stream.
inline void emit(const std::string& path, std::ostream& fallback, const std::function<void(std::ostream&)>& write,
                 bool binary = false) {
  if (path.empty() || path == "-") {
    write(fallback);
    return;
  }
  std::ofstream f(path, binary ? std::ios::binary | std::ios::out : std::ios::out);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  write(f);
  if (!f) throw std::runtime_error("failed writing " + path);
}

inline void emit_json(const std::string& path, std::ostream& fallback, const Json& j) {
  emit(path, fallback, [&](std::ostream& o) { o << j.dump(2) << '\n'; });
}

/// builtin:edge | builtin:fermat4 | file.json (polynomial JSON, ternary form)
inline PlaneCurve load_curve(const std::string& ref) {
  if (ref.rfind("builtin:", 0) == 0) return builtin_curve(ref.substr(8));
  const Json j = parse_json_text(read_file(ref), ref);
  return PlaneCurve(ref, poly_from_json<Rational>(j));
}

/// builtin:fermat4 | builtin:edge | builtin:evenK (x1^4+..+xK^4-x0^4) | file.json
inline RationalPoly load_form(const std::string& ref) {
  if (ref == "builtin:edge") return edge_quartic().form;
  if (ref == "builtin:fermat4") return fermat_quartic().form;
  if (ref.rfind("builtin:even", 0) == 0) {
    std::size_t k = 0;
    try {
      k = std::stoul(ref.substr(12));
    } catch (const std::exception&) {
      throw InputError("builtin:evenK needs an integer K");
    }
    return even_power_form(k);
  }
  if (ref.rfind("builtin:", 0) == 0) throw InputError("unknown builtin form " + ref);
  return poly_from_json<Rational>(parse_json_text(read_file(ref), ref));
}

/// "a,b" in the given chart or "u,v,w" homogeneous.
inline DualPoint parse_dual_point(const std::string& text, char chart) {
  std::vector<Rational> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) parts.push_back(parse_rational(item));
  if (parts.size() == 2) return chart_point(chart, parts[0], parts[1]);
  if (parts.size() == 3) {
    if (sgn(parts[0]) == 0 && sgn(parts[1]) == 0 && sgn(parts[2]) == 0) throw InputError("dual point is zero");
    return {parts[0], parts[1], parts[2]};
  }
  throw InputError("dual point must be 'a,b' (chart) or 'u,v,w'");
}

inline Json point_json(const ParamPoint& p) {
  Json blocks = Json::array();
  for (const auto& b : p.blocks) {
    Json coords = Json::array();
    for (const auto& z : b) coords.push_back({round_sig(z.real()), round_sig(z.imag())});
    blocks.push_back(std::move(coords));
  }
  return blocks;
}

inline Json intersect_json(const IntersectReport& r) {
  Json j;
  j["degree"] = r.degree;
  j["count"] = r.count;
  j["real_count"] = r.real_count;
  j["raw_count"] = r.raw_count;
  j["paths_tracked"] = r.paths_tracked;
  j["paths_diverged"] = r.paths_diverged;
  j["paths_failed"] = r.paths_failed;
  j["squared_up"] = r.squared_up;
  j["transversal"] = r.transversal;
  Json pts = Json::array();
  for (const auto& p : r.points)
    pts.push_back({{"point", point_json(p.point)}, {"real", p.is_real}, {"residual", round_sig(p.residual)}});
  j["points"] = std::move(pts);
  return j;
}

inline std::string usage() {
  return "usage: trisecant <subcommand> [options]\n"
         "subcommands: degree construct verify intersect trichotomy nset ica typicalrank dualscan walk linescan\n"
         "run 'trisecant <subcommand> --help' for options\n";
}

}  // namespace cli

/// Entry point; returns 0 on success, 1 when a checked property fails, 2 on bad input.
inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err, std::istream& in = std::cin) {
  using namespace cli;
  if (args.empty()) {
    err << usage();
    return 2;
  }
  CLI::App app{"real intersections of Segre-Veronese varieties with linear spaces", "trisecant"};
  app.set_version_flag("--version", std::string(TRISECANT_VERSION));
  app.require_subcommand(1);
  Common common;
  std::function<void()> action;

  // degree
  std::string spec_text;
  auto* degree = app.add_subcommand("degree", "degree of SV_m(d)");
  degree->add_option("--spec", spec_text, "JSON {\"m\":[..],\"d\":[..]}")->required();
  degree->callback([&] { action = [&] { out << parse_spec(spec_text).degree_exact().get_str() << '\n'; }; });

  // construct
  std::string kind_text;
  int even_block = -1;
  auto* construct = app.add_subcommand("construct", "build a system with a known real count");
  construct->add_option("--spec", spec_text)->required();
  construct->add_option("--kind", kind_text, "max_real|min_even|min_odd|segre1n")->required();
  construct->add_option("--even-block", even_block, "min_even: block with even degree (default first)");
  add_common(construct, common, false);
  construct->callback([&] {
    action = [&] {
      const VarietySpec spec = parse_spec(spec_text);
      ConstructedSystem c = [&] {
        if (kind_text == "max_real") return build_max_real(spec, common.seed);
        if (kind_text == "min_even") {
          std::size_t block = spec.factors();
          if (even_block >= 0) {
            block = static_cast<std::size_t>(even_block);
          } else {
            for (std::size_t i = 0; i < spec.factors() && block == spec.factors(); ++i)
              if (spec.d[i] % 2 == 0) block = i;
          }
          if (block >= spec.factors()) throw InputError("min_even needs a block with even degree");
          return build_min_even(spec, block, common.seed);
        }
        if (kind_text == "min_odd" || kind_text == "min_odd_caseA" || kind_text == "min_odd_caseB")
          return build_min_odd(spec, common.seed);
        if (kind_text == "segre1n" || kind_text == "segre1n_even") {
          if (spec.factors() != 2 || spec.m[0] != 1 || spec.d != std::vector<unsigned>{1, 1})
            throw InputError("segre1n needs spec {\"m\":[1,n],\"d\":[1,1]}");
          return build_segre1n_even(spec.m[1], common.seed);
        }
        throw InputError("unknown --kind '" + kind_text + "'");
      }();
      Json j = header("construct", {{"spec", to_json(spec)}, {"kind", kind_text}, {"seed", common.seed}});
      j["construction"] = to_json(c);
      emit_json(common.out, out, j);
    };
  });

  // verify
  std::string in_path;
  auto* verify = app.add_subcommand("verify", "solve a constructed system and compare with its oracle");
  verify->add_option("--in", in_path, "construction JSON (default stdin)");
  add_common(verify, common, true);
  verify->callback([&] {
    action = [&] {
      const std::string text = in_path.empty() ? std::string(std::istreambuf_iterator<char>(in), {}) : read_file(in_path);
      Json j = parse_json_text(text, in_path.empty() ? "stdin" : in_path);
      if (j.contains("construction")) j = j.at("construction");
      ConstructedSystem c = [&] {
        try {
          return construction_from_json(j);
        } catch (const nlohmann::json::exception& e) {
          throw InputError(std::string("bad construction JSON: ") + e.what());
        }
      }();
      const VerifyReport r = verify_construction(c, tracker_of(common));
      out << "real=" << r.real << " total=" << r.total << '\n';
      Json rep = header("verify", {{"seed", common.seed}, {"tracker", tracker_json(tracker_of(common))}});
      rep["kind"] = to_string(c.kind);
      rep["spec"] = to_json(c.spec);
      rep["real"] = r.real;
      rep["total"] = r.total;
      rep["expected_real"] = r.expected_real;
      rep["expected_total"] = r.expected_total;
      rep["transversal"] = r.transversal;
      rep["max_match_distance"] = r.max_match_distance ? Json(round_sig(*r.max_match_distance)) : Json(nullptr);
      rep["problems"] = r.problems;
      rep["passed"] = r.passed;
      if (!common.out.empty()) emit_json(common.out, out, rep);
      if (!r.passed) {
        for (const auto& p : r.problems) err << "verify: " << p << '\n';
        throw AssertionFailure("verification failed");
      }
    };
  });

  // intersect
  std::string section_path;
  std::size_t span_points = 0;
  auto* inter = app.add_subcommand("intersect", "intersect SV_m(d) with a linear space");
  inter->add_option("--spec", spec_text)->required();
  inter->add_option("--section", section_path, "JSON {\"forms\": [[..],..]} of real cutting forms");
  inter->add_option("--span", span_points, "use the span of this many random real points of X");
  add_common(inter, common, true);
  inter->callback([&] {
    action = [&] {
      const VarietySpec spec = parse_spec(spec_text);
      const TrackerConfig cfg = tracker_of(common);
      LinearSection section;
      Json cfg_json{{"spec", to_json(spec)}, {"seed", common.seed}, {"tracker", tracker_json(cfg)}};
      if (!section_path.empty() && span_points > 0) throw InputError("--section and --span are exclusive");
      if (!section_path.empty()) {
        const Json s = parse_json_text(read_file(section_path), section_path);
        const auto rows = s.at("forms");
        Eigen::MatrixXd forms(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(spec.ambient_dim()));
        for (std::size_t r = 0; r < rows.size(); ++r) {
          if (rows[r].size() != spec.ambient_dim()) throw InputError("form length must equal N");
          for (std::size_t c = 0; c < rows[r].size(); ++c)
            forms(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = detail::json_to_double(rows[r][c]);
        }
        section = section_from_forms(spec, forms);
        cfg_json["section"] = section_path;
      } else if (span_points > 0) {
        std::vector<ParamPoint> pts;
        for (std::size_t k = 0; k < span_points; ++k) pts.push_back(sample_real_point(spec, derive_seed(common.seed, k, 0x7074)));
        section = span_section(spec, pts);
        cfg_json["span"] = span_points;
      } else {
        section = random_complementary_section(spec, derive_seed(common.seed, 0, 0x7263));
        cfg_json["section"] = "random";
      }
      Json j = header("intersect", std::move(cfg_json));
      j["result"] = intersect_json(intersect(section, cfg));
      emit_json(common.out, out, j);
    };
  });

  // trichotomy
  std::size_t n = 0, trials = 100;
  std::string csv_path;
  auto* tri = app.add_subcommand("trichotomy", "span of n random real points of X: recovery statistics");
  tri->add_option("--spec", spec_text)->required();
  tri->add_option("--n", n, "number of spanning points")->required();
  tri->add_option("--trials", trials);
  tri->add_option("--csv", csv_path, "per-trial CSV log");
  add_common(tri, common, true);
  tri->callback([&] {
    action = [&] {
      const VarietySpec spec = parse_spec(spec_text);
      const TrackerConfig cfg = tracker_of(common);
      const TrichotomyResult r = run_trichotomy(spec, n, trials, cfg);
      Json h = header("trichotomy", {{"spec", to_json(spec)}, {"n", n}, {"trials", trials}, {"seed", common.seed},
                                     {"tracker", tracker_json(cfg)}});
      h["summary"] = r.summary;
      emit_json(common.out, out, h);
      if (!csv_path.empty())
        emit(csv_path, out, [&](std::ostream& o) { o << "# " << header("trichotomy", h["config"]).dump() << '\n' << trials_csv(r.trials); });
    };
  });

  // nset
  bool no_witnesses = false;
  std::size_t nset_trials = 500;
  auto* nset = app.add_subcommand("nset", "estimate the set of real intersection counts");
  nset->add_option("--spec", spec_text)->required();
  nset->add_option("--trials", nset_trials);
  nset->add_flag("--no-witnesses", no_witnesses, "sampling only");
  add_common(nset, common, true);
  nset->callback([&] {
    action = [&] {
      const VarietySpec spec = parse_spec(spec_text);
      const TrackerConfig cfg = tracker_of(common);
      const NEstimate e = estimate_N(spec, nset_trials, cfg, !no_witnesses);
      Json h = header("nset", {{"spec", to_json(spec)}, {"trials", nset_trials}, {"witnesses", !no_witnesses},
                               {"seed", common.seed}, {"tracker", tracker_json(cfg)}});
      h["summary"] = to_json(e);
      emit_json(common.out, out, h);
      if (h["summary"]["parity_violations"].get<std::size_t>() > 0 || h["summary"]["bound_violations"].get<std::size_t>() > 0)
        throw AssertionFailure("observed real counts violate parity or the degree bound");
    };
  });

  // ica
  unsigned big_i = 3;
  std::size_t big_j = 3;
  auto* ica = app.add_subcommand("ica", "identifiability of J Gaussian columns on the second Veronese of P^{I-1}");
  ica->add_option("--I", big_i)->required();
  ica->add_option("--J", big_j)->required();
  ica->add_option("--trials", trials);
  ica->add_option("--csv", csv_path);
  add_common(ica, common, true);
  ica->callback([&] {
    action = [&] {
      const TrackerConfig cfg = tracker_of(common);
      const TrichotomyResult r = ica_identifiability(big_i, big_j, trials, cfg);
      Json h = header("ica", {{"I", big_i}, {"J", big_j}, {"trials", trials}, {"seed", common.seed}, {"tracker", tracker_json(cfg)}});
      h["summary"] = r.summary;
      emit_json(common.out, out, h);
      if (!csv_path.empty())
        emit(csv_path, out, [&](std::ostream& o) { o << "# " << header("ica", h["config"]).dump() << '\n' << trials_csv(r.trials); });
    };
  });

  // typicalrank
  std::size_t ell = 0;
  auto* trank = app.add_subcommand("typicalrank", "real points of X in the span of ell random slices");
  trank->add_option("--spec", spec_text)->required();
  trank->add_option("--ell", ell)->required();
  trank->add_option("--trials", trials);
  add_common(trank, common, true);
  trank->callback([&] {
    action = [&] {
      const VarietySpec spec = parse_spec(spec_text);
      const TrackerConfig cfg = tracker_of(common);
      const TypicalRankResult r = typical_rank_experiment(spec, ell, trials, cfg);
      Json h = header("typicalrank", {{"spec", to_json(spec)}, {"ell", ell}, {"trials", trials}, {"seed", common.seed},
                                      {"tracker", tracker_json(cfg)}});
      h["summary"] = r.summary;
      emit_json(common.out, out, h);
    };
  });

  // dualscan
  std::string curve_ref = "builtin:edge", chart_text = "w", format;
  std::vector<std::string> range{"-3", "3", "-3", "3"};
  std::size_t res = 200;
  auto* dscan = app.add_subcommand("dualscan", "real intersection counts over a grid of lines");
  dscan->add_option("--curve", curve_ref, "builtin:edge|builtin:fermat4|file.json");
  dscan->add_option("--chart", chart_text, "u, v or w");
  dscan->add_option("--range", range, "u0 u1 v0 v1")->expected(4);
  dscan->add_option("--res", res, "cells per side");
  dscan->add_option("--format", format, "csv|ppm (default from --out extension, else csv)");
  add_common(dscan, common, false);
  dscan->callback([&] {
    action = [&] {
      if (chart_text.size() != 1) throw InputError("chart must be u, v or w");
      const PlaneCurve curve = load_curve(curve_ref);
      const std::vector<Rational> r{parse_rational(range[0]), parse_rational(range[1]), parse_rational(range[2]),
                                    parse_rational(range[3])};
      std::string fmt = format;
      if (fmt.empty()) fmt = common.out.size() > 4 && common.out.substr(common.out.size() - 4) == ".ppm" ? "ppm" : "csv";
      const ScanGrid g = scan(curve, chart_text[0], r[0], r[1], r[2], r[3], res, common.workers);
      const Json h = header("dualscan", {{"curve", curve_ref}, {"chart", chart_text}, {"range", range}, {"res", res}});
      emit(common.out, out, [&](std::ostream& o) { emit_grid(g, fmt, o, h); }, fmt == "ppm");
      std::size_t bad = 0;
      for (int c : g.cells)
        if (c >= 0 && (c % 2 != static_cast<int>(curve.degree % 2) || c > static_cast<int>(curve.degree))) ++bad;
      if (!common.out.empty() && common.out != "-") {
        Json s = h;
        Json hist = Json::object();
        for (const auto& [k, v] : g.histogram()) hist[k < 0 ? std::string("boundary") : std::to_string(k)] = v;
        s["histogram"] = std::move(hist);
        s["invariant_violations"] = bad;
        out << s.dump(2) << '\n';
      }
      if (bad > 0) throw AssertionFailure("cell counts violate parity or the degree bound");
    };
  });

  // walk
  std::string from_text, to_text;
  std::size_t steps = 64;
  auto* walk_cmd = app.add_subcommand("walk", "count changes along a segment of lines");
  walk_cmd->add_option("--curve", curve_ref);
  walk_cmd->add_option("--chart", chart_text);
  walk_cmd->add_option("--from", from_text, "a,b in the chart or u,v,w")->required();
  walk_cmd->add_option("--to", to_text, "a,b in the chart or u,v,w")->required();
  walk_cmd->add_option("--steps", steps);
  add_common(walk_cmd, common, false);
  walk_cmd->callback([&] {
    action = [&] {
      if (chart_text.size() != 1) throw InputError("chart must be u, v or w");
      const PlaneCurve curve = load_curve(curve_ref);
      const WalkReport w = walk(curve, parse_dual_point(from_text, chart_text[0]), parse_dual_point(to_text, chart_text[0]), steps);
      Json h = header("walk", {{"curve", curve_ref}, {"chart", chart_text}, {"from", from_text}, {"to", to_text}, {"steps", steps}});
      h["result"] = to_json(w);
      emit_json(common.out, out, h);
      if (!w.all_resolved_delta_two()) throw AssertionFailure("a resolved crossing has |delta| != 2");
    };
  });

  // linescan
  std::string form_ref;
  std::size_t line_trials = 2000;
  auto* lscan = app.add_subcommand("linescan", "real intersection counts of a hypersurface with random lines");
  lscan->add_option("--form", form_ref, "builtin:fermat4|builtin:edge|builtin:evenK|file.json")->required();
  lscan->add_option("--trials", line_trials);
  add_common(lscan, common, false);
  lscan->callback([&] {
    action = [&] {
      const RationalPoly g = load_form(form_ref);
      const LineScanSummary s = hypersurface_line_scan(g, line_trials, common.seed, common.workers);
      Json h = header("linescan", {{"form", form_ref}, {"trials", line_trials}, {"seed", common.seed}});
      h["summary"] = to_json(s);
      emit_json(common.out, out, h);
    };
  });

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    err << usage();
    return 2;
  }
  try {
    if (action) action();
    return 0;
  } catch (const AssertionFailure& e) {
    err << "assertion failed: " << e.what() << '\n';
    return 1;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return 2;
  } catch (const nlohmann::json::exception& e) {
    err << "input error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace trisecant

#endif  // TRISECANT_CLI_HPP
