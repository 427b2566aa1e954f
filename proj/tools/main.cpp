#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "scpseudo/base_matrix.hpp"
#include "scpseudo/convolutional_instance.hpp"
#include "scpseudo/errors.hpp"
#include "scpseudo/growth.hpp"
#include "scpseudo/pseudocodeword.hpp"
#include "scpseudo/rng.hpp"
#include "scpseudo/sweep.hpp"
#include "scpseudo/tanner_graph.hpp"

using namespace scpseudo;
using nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open input file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot open output file: " + path);
  out << text;
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

// Either a standalone matrix or a spreading, depending on the input document.
struct BaseInput {
  std::optional<EdgeSpreading> spreading;
  std::optional<BaseMatrix> matrix;
};

BaseInput load_base(const std::string& path) {
  BaseInput in;
  if (path.empty()) {
    // Built-in (3,6) spreading with components [1 2] and [2 1].
    EdgeSpreading sp;
    sp.components = {BaseMatrix::from_rows({{1, 2}}), BaseMatrix::from_rows({{2, 1}})};
    in.spreading = sp;
    return in;
  }
  std::string text = read_file(path);
  json j = json::parse(text);
  if (j.contains("components"))
    in.spreading = spreading_from_json(text);
  else if (j.contains("rows"))
    in.matrix = base_matrix_from_json(text);
  else
    throw std::invalid_argument("input JSON needs a \"components\" or \"rows\" field");
  return in;
}

CouplingKind parse_kind(const std::string& s) {
  if (s == "block") return CouplingKind::block;
  if (s == "tailbiting") return CouplingKind::tailbiting;
  if (s == "terminated") return CouplingKind::terminated;
  throw std::invalid_argument("unknown kind: " + s);
}

BaseMatrix materialize(const BaseInput& in, CouplingKind kind, int factor) {
  if (in.matrix) {
    if (kind != CouplingKind::block)
      throw std::invalid_argument("kind " + std::string(kind == CouplingKind::tailbiting
                                                            ? "tailbiting"
                                                            : "terminated") +
                                  " needs a spreading input, got a plain matrix");
    return *in.matrix;
  }
  const EdgeSpreading& sp = *in.spreading;
  switch (kind) {
    case CouplingKind::block:
      return sp.sum();
    case CouplingKind::tailbiting:
      if (factor < 1) throw std::invalid_argument("factor must be >= 1");
      return tailbiting_base(sp, static_cast<std::size_t>(factor));
    case CouplingKind::terminated:
      if (factor < 1) throw std::invalid_argument("factor must be >= 1");
      return terminated_base(sp, static_cast<std::size_t>(factor));
    default:
      throw std::invalid_argument("unsupported kind");
  }
}

std::pair<int, int> parse_factors(const std::string& s) {
  auto pos = s.find("..");
  if (pos == std::string::npos) {
    int f = std::stoi(s);
    return {f, f};
  }
  int a = std::stoi(s.substr(0, pos));
  int b = std::stoi(s.substr(pos + 2));
  if (a > b) throw std::invalid_argument("factor range must satisfy a <= b: " + s);
  return {a, b};
}

const char* kind_name(CouplingKind kind) {
  switch (kind) {
    case CouplingKind::block: return "block";
    case CouplingKind::tailbiting: return "tailbiting";
    case CouplingKind::terminated: return "terminated";
    default: return "unterminated";
  }
}

struct CommonFlags {
  std::string base_path;
  std::string kind = "block";
  int factor = 1;
  int m = 2;
  std::uint64_t seed = kDefaultSeed;
  int starts = 32;
  double grid_step = 0.0005;
  double bisect_tol = 1e-4;
  double delta_max = 0.2;
  int threads = 1;
  std::string out;
  std::string format = "csv";
};

GrowthOptions make_options(const CommonFlags& f) {
  GrowthOptions o;
  o.starts = f.starts;
  o.seed = f.seed;
  o.grid_step = f.grid_step;
  o.bisect_tol = f.bisect_tol;
  o.delta_max = f.delta_max;
  o.threads = f.threads;
  if (o.starts < 1 || o.grid_step <= 0 || o.bisect_tol <= 0 || o.delta_max <= 0)
    throw std::invalid_argument("starts, grid-step, bisect-tol and delta-max must be positive");
  return o;
}

int cmd_construct(const CommonFlags& f, int lift_n) {
  BaseInput in = load_base(f.base_path);
  CouplingKind kind = parse_kind(f.kind);
  if (kind != CouplingKind::block && f.factor < 1)
    throw std::invalid_argument("factor must be >= 1 for " + f.kind);
  BaseMatrix B = materialize(in, kind, f.factor);

  if (lift_n > 0) {
    TannerGraph G = lift(B, static_cast<std::size_t>(lift_n), f.seed);
    std::ostringstream ss;
    ss << "c kind=" << kind_name(kind) << " factor=" << f.factor << " lift=" << lift_n
       << " seed=" << f.seed << "\n";
    ss << G.to_edge_list();
    write_text(f.out, ss.str());
    return 0;
  }

  json j = json::parse(base_matrix_to_json(B));
  j["kind"] = kind_name(kind);
  if (kind != CouplingKind::block) j["factor"] = f.factor;
  if (in.spreading) {
    Rational rate = design_rate(*in.spreading, kind, static_cast<std::size_t>(f.factor));
    j["design_rate"] = rate.to_string();
    j["design_rate_value"] = rate.to_double();
  }
  write_text(f.out, j.dump(1) + "\n");
  return 0;
}

int cmd_growth(const CommonFlags& f) {
  BaseInput in = load_base(f.base_path);
  BaseMatrix B = materialize(in, parse_kind(f.kind), f.factor);
  GrowthOptions opts = make_options(f);

  GrowthCurve curve = zero_crossing(B, f.m, opts);

  json meta = {{"command", "growth"},
               {"m", f.m},
               {"seed", f.seed},
               {"starts", f.starts},
               {"grid_step", f.grid_step},
               {"bisect_tol", f.bisect_tol},
               {"delta_max", f.delta_max},
               {"threads", f.threads},
               {"samples", curve.samples.size()}};
  if (curve.zero_crossing)
    meta["r_plus"] = *curve.zero_crossing;
  else
    meta["r_plus"] = nullptr;

  if (!f.out.empty()) {
    if (f.format == "json") {
      json full = meta;
      full["curve"] = json::array();
      for (const auto& s : curve.samples)
        full["curve"].push_back({{"delta", s.delta},
                                 {"r", s.r},
                                 {"feasible", s.feasible},
                                 {"starts_used", s.starts_used}});
      write_text(f.out, full.dump(1) + "\n");
    } else {
      std::ostringstream ss;
      ss << "# growth curve\n";
      ss << "# m=" << f.m << " seed=" << f.seed << " starts=" << f.starts
         << " grid_step=" << fmt(f.grid_step) << " bisect_tol=" << fmt(f.bisect_tol)
         << " delta_max=" << fmt(f.delta_max) << " threads=" << f.threads << "\n";
      ss << "delta,r,feasible,starts_used\n";
      for (const auto& s : curve.samples)
        ss << fmt(s.delta) << ',' << fmt(s.r) << ',' << (s.feasible ? 1 : 0) << ','
           << s.starts_used << "\n";
      write_text(f.out, ss.str());
    }
  }
  std::cout << meta.dump(1) << "\n";
  return 0;
}

json report_to_json(const FreeGrowthRateReport& rep, int m) {
  json jr = {{"m", m},
             {"tol", rep.tol},
             {"bound_scaling", rep.bound_scaling},
             {"points", json::array()}};
  jr["best_lower"] = rep.best_lower ? json(*rep.best_lower) : json(nullptr);
  jr["best_upper"] = rep.best_upper ? json(*rep.best_upper) : json(nullptr);
  jr["coincide_at"] = rep.coincide_at ? json(*rep.coincide_at) : json(nullptr);
  jr["delta_free"] = rep.delta_free ? json(*rep.delta_free) : json(nullptr);
  for (const auto& p : rep.points)
    jr["points"].push_back({{"kind", kind_name(p.kind)},
                            {"factor", p.factor},
                            {"m", p.m},
                            {"delta_min", p.delta_min},
                            {"bound", p.bound},
                            {"has_crossing", p.has_crossing}});
  return jr;
}

int cmd_sweep(const CommonFlags& f, const std::string& factors, std::vector<int> ms,
              double tol, const std::string& cache_path) {
  BaseInput in = load_base(f.base_path);
  if (!in.spreading) throw std::invalid_argument("sweep needs a spreading input");
  auto [lo, hi] = parse_factors(factors);
  if (lo < 1) throw std::invalid_argument("factors must start at 1 or above");
  if (ms.empty()) ms.push_back(f.m);
  GrowthOptions opts = make_options(f);

  SolveCache cache_obj(cache_path);
  SolveCache* cache = cache_path.empty() ? nullptr : &cache_obj;

  json out = {{"command", "sweep"},
              {"seed", f.seed},
              {"starts", f.starts},
              {"grid_step", f.grid_step},
              {"bisect_tol", f.bisect_tol},
              {"delta_max", f.delta_max},
              {"threads", f.threads},
              {"factors", {lo, hi}},
              {"reports", json::array()}};
  std::ostringstream csv;
  csv << "# sweep\n";
  csv << "# seed=" << f.seed << " starts=" << f.starts << " grid_step=" << fmt(f.grid_step)
      << " bisect_tol=" << fmt(f.bisect_tol) << " tol=" << fmt(tol)
      << " bound_scaling=delta_min*factor/(m_s+1)\n";
  csv << "kind,factor,m,delta_min,bound\n";

  for (int m : ms) {
    FreeGrowthRateReport rep =
        free_growth_rate_bounds(*in.spreading, m, lo, hi, tol, opts, cache);
    out["reports"].push_back(report_to_json(rep, m));
    for (const auto& p : rep.points)
      csv << kind_name(p.kind) << ',' << p.factor << ',' << p.m << ','
          << fmt(p.delta_min) << ',' << fmt(p.bound) << "\n";
  }

  if (!f.out.empty())
    write_text(f.out, f.format == "json" ? out.dump(1) + "\n" : csv.str());
  std::cout << out.dump(1) << "\n";
  return 0;
}

int run_demo(const std::string& out_path) {
  EdgeSpreading sp;
  sp.components = {BaseMatrix::from_rows({{1, 1}}), BaseMatrix::from_rows({{1, 1}})};
  ConvolutionalInstance::Tables tables;
  tables.lift = {{0}, {0}, {0}, {0}};
  tables.cover = {{0, 1}, {0, 1}, {0, 1}, {1, 0}};
  auto inst = ConvolutionalInstance::with_tables(sp, 2, 3, 1, 2, 1, std::move(tables));

  std::vector<int> bits = {1, 0, 1, 0, 1, 1, 0, 0, 0, 1, 1, 0,
                           0, 1, 0, 1, 0, 1, 1, 0, 0, 0, 0, 0};
  BitVec c(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i)
    if (bits[i]) c.set(i, true);
  if (!inst.is_window_cover_codeword(c))
    throw property_error("demo vector is not a window cover codeword");

  Pseudocodeword w = project_pseudocodeword(c, 2);
  BitVec wrapped = inst.wrap(c);
  Pseudocodeword what = project_pseudocodeword(wrapped, 2);
  if (bec_pseudoweight(what) > bec_pseudoweight(w))
    throw property_error("wrapped pseudoweight exceeds the window pseudoweight");

  json j = {{"command", "oracle"},
            {"demo", true},
            {"lambda", 2},
            {"window_instants", 6},
            {"m", 2},
            {"w", w.values},
            {"pseudoweight", bec_pseudoweight(w)},
            {"w_wrapped", what.values},
            {"pseudoweight_wrapped", bec_pseudoweight(what)}};
  std::string text = j.dump(1) + "\n";
  if (!out_path.empty()) write_text(out_path, text);
  std::cout << text;
  return 0;
}

int cmd_oracle(const CommonFlags& f, int lift_n, int samples, int J, bool demo) {
  if (demo) return run_demo(f.out);

  BaseInput in = load_base(f.base_path);
  CouplingKind kind = parse_kind(f.kind);
  BaseMatrix B = materialize(in, kind, f.factor);
  if (lift_n < 1) throw std::invalid_argument("lift must be >= 1");

  TannerGraph G = lift(B, static_cast<std::size_t>(lift_n), f.seed);
  SearchBudget budget;
  budget.seed = f.seed;
  PseudoweightReport rep = min_pseudoweight(G, static_cast<std::size_t>(f.m), budget);

  json j = {{"command", "oracle"},
            {"kind", kind_name(kind)},
            {"factor", f.factor},
            {"lift", lift_n},
            {"m", f.m},
            {"seed", f.seed},
            {"w_min", rep.w_min},
            {"witness", rep.witness.values},
            {"exhaustive", rep.exhaustive},
            {"covers_searched", rep.covers_searched}};

  // Wrap property sampling needs the convolutional structure.
  if (in.spreading && kind == CouplingKind::tailbiting && samples > 0) {
    auto inst = ConvolutionalInstance::random(*in.spreading,
                                              static_cast<std::size_t>(f.factor),
                                              static_cast<std::size_t>(J),
                                              static_cast<std::size_t>(lift_n),
                                              static_cast<std::size_t>(f.m), 1,
                                              mix_seed(f.seed, 0x77));
    auto basis = inst.restricted_window_basis();
    Rng rng(mix_seed(f.seed, 0x78));
    int violations = 0, checked = 0;
    for (int s = 0; s < samples && !basis.empty(); ++s) {
      BitVec c(basis.front().size());
      bool nonzero = false;
      for (const auto& b : basis)
        if (rng.below(2) == 1) {
          c ^= b;
          nonzero = true;
        }
      if (!nonzero) continue;
      Pseudocodeword w = project_pseudocodeword(c, static_cast<std::size_t>(f.m));
      BitVec wrapped = inst.wrap(c); // throws property_error if parity fails
      Pseudocodeword what = project_pseudocodeword(wrapped, static_cast<std::size_t>(f.m));
      if (bec_pseudoweight(what) > bec_pseudoweight(w)) ++violations;
      ++checked;
    }
    j["wrap_samples"] = checked;
    j["wrap_violations"] = violations;
    if (violations > 0) {
      std::cout << j.dump(1) << "\n";
      throw property_error("wrapped pseudoweight exceeded the window pseudoweight");
    }
  }

  std::string text = j.dump(1) + "\n";
  if (!f.out.empty()) write_text(f.out, text);
  std::cout << text;
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Protograph pseudoweight enumerator growth rates for LDPC ensembles"};
  app.require_subcommand(1);

  CommonFlags f;
  int lift_n = 0;
  int oracle_lift = 1;
  int samples = 1000;
  int J = 3;
  bool demo = false;
  std::string factors = "2..20";
  std::vector<int> ms;
  double tol = 2e-3;
  std::string cache_path;

  auto add_common = [&](CLI::App* sub, bool solver_flags) {
    sub->add_option("--base", f.base_path, "Base matrix or spreading JSON file");
    sub->add_option("--kind", f.kind, "block | tailbiting | terminated")
        ->check(CLI::IsMember({"block", "tailbiting", "terminated"}));
    sub->add_option("--factor", f.factor, "Termination / tail-biting factor");
    sub->add_option("--m", f.m, "Cover degree");
    sub->add_option("--seed", f.seed, "PRNG seed");
    sub->add_option("--out", f.out, "Output file (default stdout)");
    if (solver_flags) {
      sub->add_option("--starts", f.starts, "Multi-start count");
      sub->add_option("--grid-step", f.grid_step, "Zero-crossing grid step");
      sub->add_option("--bisect-tol", f.bisect_tol, "Zero-crossing bisection width");
      sub->add_option("--delta-max", f.delta_max, "Largest relative pseudoweight scanned");
      sub->add_option("--threads", f.threads, "Worker threads for multi-start");
      sub->add_option("--format", f.format, "csv | json")
          ->check(CLI::IsMember({"csv", "json"}));
    }
  };

  CLI::App* c_construct = app.add_subcommand("construct", "Build coupled base matrices and lifts");
  add_common(c_construct, false);
  c_construct->add_option("--lift", lift_n, "Emit an N-lift edge list instead of a matrix");

  CLI::App* c_growth = app.add_subcommand("growth", "Solve the growth-rate curve and its zero crossing");
  add_common(c_growth, true);

  CLI::App* c_sweep = app.add_subcommand("sweep", "Sweep factors and bound the free growth rate");
  add_common(c_sweep, true);
  c_sweep->add_option("--factors", factors, "Factor range a..b");
  c_sweep->add_option("--ms", ms, "Cover degrees (repeatable)");
  c_sweep->add_option("--tol", tol, "Bound coincidence tolerance");
  c_sweep->add_option("--cache", cache_path, "JSON memo file for crossing solves");

  CLI::App* c_oracle = app.add_subcommand("oracle", "Exhaustive pseudoweight search and wrap checks");
  add_common(c_oracle, false);
  c_oracle->add_option("--lift", oracle_lift, "Lift order N");
  c_oracle->add_option("--samples", samples, "Wrap property sample count");
  c_oracle->add_option("--J", J, "Window length in wrap periods");
  c_oracle->add_flag("--demo", demo, "Run the built-in worked wrapping instance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (c_construct->parsed()) return cmd_construct(f, lift_n);
    if (c_growth->parsed()) return cmd_growth(f);
    if (c_sweep->parsed()) return cmd_sweep(f, factors, ms, tol, cache_path);
    if (c_oracle->parsed()) return cmd_oracle(f, oracle_lift, samples, J, demo);
  } catch (const budget_error& e) {
    std::cerr << "budget exceeded: " << e.what()
              << "\nreduce the instance (factor, lift, m) or raise the relevant cap\n";
    return 3;
  } catch (const property_error& e) {
    std::cerr << "property violation: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
