#include "scpseudo/growth.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "scpseudo/krawtchouk.hpp"
#include "scpseudo/parallel.hpp"

namespace scpseudo {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Iterates keep every class at least this far off zero so log-derived
// gradients stay finite and boundary classes can re-enter smoothly.
constexpr double kTypeFloor = 1e-12;

void project_simplex_floor(std::vector<double>& v, double floor_val) {
  double S = 1.0 - floor_val * static_cast<double>(v.size());
  std::vector<double> u(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) u[i] = v[i] - floor_val;
  std::vector<double> su = u;
  std::sort(su.begin(), su.end(), std::greater<double>());
  double css = 0, theta = su[0] - S;
  for (std::size_t i = 0; i < su.size(); ++i) {
    css += su[i];
    double t = (css - S) / static_cast<double>(i + 1);
    if (su[i] - t > 0) theta = t;
  }
  for (std::size_t i = 0; i < v.size(); ++i)
    v[i] = std::max(u[i] - theta, 0.0) + floor_val;
}

double zero_mass(const TypeAssignment& tau) {
  double s = 0;
  for (const auto& t : tau) s += t[0];
  return s;
}

// Euclidean projection onto the feasible set: each tau_v on the floored
// simplex and the total zero mass pinned to target. The coupling multiplier
// theta shifts every variable's zero symbol; zero_mass(tau(theta)) is
// nonincreasing and piecewise linear in theta, so bisection finds it.
void project_feasible(TypeAssignment& tau, double target, int /*m*/) {
  double span = 2.0;
  for (const auto& t : tau)
    for (double x : t) span = std::max(span, std::abs(x) + 2.0);
  auto apply = [&](double theta, TypeAssignment& out) {
    out = tau;
    for (auto& t : out) {
      t[0] -= theta;
      project_simplex_floor(t, kTypeFloor);
    }
    return zero_mass(out);
  };
  double lo = -span, hi = span;
  TypeAssignment work;
  for (int it = 0; it < 80; ++it) {
    double mid = 0.5 * (lo + hi);
    if (apply(mid, work) >= target)
      lo = mid;
    else
      hi = mid;
  }
  apply(0.5 * (lo + hi), work);
  tau = std::move(work);
}

double dot(const TypeAssignment& a, const TypeAssignment& b) {
  double s = 0;
  for (std::size_t v = 0; v < a.size(); ++v)
    for (std::size_t w = 0; w < a[v].size(); ++w) s += a[v][w] * b[v][w];
  return s;
}

double inf_norm_diff(const TypeAssignment& a, const TypeAssignment& b) {
  double s = 0;
  for (std::size_t v = 0; v < a.size(); ++v)
    for (std::size_t w = 0; w < a[v].size(); ++w)
      s = std::max(s, std::abs(a[v][w] - b[v][w]));
  return s;
}

// Moves the total mass at symbol 0 onto the target exactly, spreading the
// adjustment proportionally to per-variable capacity and rescaling each tail.
void repair_zero_mass(TypeAssignment& tau, double target, int m) {
  for (auto& t : tau) {
    double s = 0;
    for (double& x : t) {
      if (x < 0) x = 0;
      s += x;
    }
    if (s <= 0) {
      t.assign(t.size(), 0.0);
      t[0] = 1.0;
    } else {
      for (double& x : t) x /= s;
    }
  }
  std::vector<double> binw(m + 1);
  double binsum = 0;
  for (int w = 1; w <= m; ++w) {
    binw[w] = static_cast<double>(binomial(m, w));
    binsum += binw[w];
  }
  for (int iter = 0; iter < 200; ++iter) {
    double g = zero_mass(tau) - target;
    if (std::abs(g) < 1e-15 * std::max(1.0, std::abs(target))) break;
    double cap_total = 0;
    std::vector<double> cap(tau.size());
    for (std::size_t v = 0; v < tau.size(); ++v) {
      cap[v] = g > 0 ? tau[v][0] : 1.0 - tau[v][0];
      cap_total += cap[v];
    }
    if (cap_total <= 1e-300) break;
    double move = std::min(std::abs(g), cap_total);
    for (std::size_t v = 0; v < tau.size(); ++v) {
      double d = (g > 0 ? 1.0 : -1.0) * move * cap[v] / cap_total;
      double old0 = tau[v][0];
      double new0 = std::clamp(old0 - d, 0.0, 1.0);
      double tail_old = 1.0 - old0, tail_new = 1.0 - new0;
      if (tail_old > 1e-300) {
        double scale = tail_new / tail_old;
        for (int w = 1; w <= m; ++w) tau[v][w] *= scale;
      } else {
        for (int w = 1; w <= m; ++w) tau[v][w] = tail_new * binw[w] / binsum;
      }
      tau[v][0] = new0;
    }
  }
}

TypeAssignment natural_start(std::size_t b_v, int m, double delta) {
  double binsum = 0;
  for (int w = 1; w <= m; ++w) binsum += static_cast<double>(binomial(m, w));
  // Tail mass delta per variable, shaped like the binomial profile.
  double x = std::min(delta, 0.999);
  TypeAssignment tau(b_v, std::vector<double>(m + 1, 0));
  for (std::size_t v = 0; v < b_v; ++v) {
    tau[v][0] = 1.0 - x;
    for (int w = 1; w <= m; ++w)
      tau[v][w] = x * static_cast<double>(binomial(m, w)) / binsum;
  }
  return tau;
}

TypeAssignment random_start(Rng& rng, std::size_t b_v, int m, double delta) {
  TypeAssignment tau(b_v, std::vector<double>(m + 1, 0));
  std::vector<double> lam(b_v);
  double lam_sum = 0;
  for (std::size_t v = 0; v < b_v; ++v) {
    lam[v] = rng.unit() + 0.05;
    lam_sum += lam[v];
  }
  double total = static_cast<double>(b_v) * delta;
  for (std::size_t v = 0; v < b_v; ++v) {
    double l = std::min(lam[v] * total / lam_sum, 0.999);
    double xsum = 0;
    std::vector<double> x(m + 1, 0);
    for (int w = 1; w <= m; ++w) {
      x[w] = (rng.unit() + 0.1) * static_cast<double>(binomial(m, w));
      xsum += x[w];
    }
    tau[v][0] = 1.0 - l;
    for (int w = 1; w <= m; ++w) tau[v][w] = l * x[w] / xsum;
  }
  repair_zero_mass(tau, static_cast<double>(b_v) * (1.0 - delta), m);
  return tau;
}

struct StartOutcome {
  bool feasible = false;
  double F = kNegInf;
  TypeAssignment tau;
};

// Projected Barzilai-Borwein ascent with a nonmonotone (GLL) line search.
// The measure constraint is linear, so every iterate is projected onto the
// exact feasible set and the objective needs no penalty terms.
void spg_maximize(ObjectiveF& obj, TypeAssignment& tau, const GrowthOptions& opts,
                  double target) {
  int m = obj.m();
  auto eval = [&](const TypeAssignment& t, ObjectiveEval& ev, bool with_grad) {
    ev = obj.eval(t, with_grad);
    return ev.feasible ? ev.value : kNegInf;
  };

  ObjectiveEval ev;
  double phi = eval(tau, ev, true);
  if (phi == kNegInf) return;
  TypeAssignment grad = ev.gradient;

  constexpr int M = 8;
  std::vector<double> hist(M, phi);
  int hist_pos = 0;
  double alpha = 1.0;
  double best_phi = phi;
  int stale = 0;
  // Backtracking restart scale, remembered across iterations. When tau rides
  // the feasibility boundary most trial points are infeasible; re-paying the
  // whole halving ladder every iteration dominates the solve time otherwise.
  double step_start = 1.0;

  for (int iter = 0; iter < opts.max_spg_iters; ++iter) {
    // Stationarity: unit-step projected gradient residual.
    TypeAssignment probe = tau;
    for (std::size_t v = 0; v < tau.size(); ++v)
      for (std::size_t w = 0; w < tau[v].size(); ++w) probe[v][w] += grad[v][w];
    project_feasible(probe, target, m);
    if (inf_norm_diff(probe, tau) < opts.grad_tol) break;

    TypeAssignment cand = tau;
    for (std::size_t v = 0; v < tau.size(); ++v)
      for (std::size_t w = 0; w < tau[v].size(); ++w) cand[v][w] += alpha * grad[v][w];
    project_feasible(cand, target, m);
    TypeAssignment dir = cand;
    for (std::size_t v = 0; v < tau.size(); ++v)
      for (std::size_t w = 0; w < tau[v].size(); ++w) dir[v][w] -= tau[v][w];
    double gd = dot(grad, dir);
    if (gd <= 0 || inf_norm_diff(cand, tau) < 1e-14) {
      alpha = 1.0;
      continue;
    }

    double ref = *std::min_element(hist.begin(), hist.end());
    double step = step_start;
    TypeAssignment trial;
    ObjectiveEval ev_t;
    double phi_t = kNegInf;
    bool accepted = false;
    while (step >= 1e-10) {
      trial = tau;
      for (std::size_t v = 0; v < tau.size(); ++v)
        for (std::size_t w = 0; w < tau[v].size(); ++w) trial[v][w] += step * dir[v][w];
      phi_t = eval(trial, ev_t, false);
      if (phi_t > kNegInf && phi_t >= ref + 1e-4 * step * gd) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    step_start = std::min(1.0, step * 4.0);

    // Gradients only for the accepted point; rejected trials never need them.
    phi_t = eval(trial, ev_t, true);
    double ss = 0, sy = 0;
    for (std::size_t v = 0; v < tau.size(); ++v)
      for (std::size_t w = 0; w < tau[v].size(); ++w) {
        double s = trial[v][w] - tau[v][w];
        double y = ev_t.gradient[v][w] - grad[v][w];
        ss += s * s;
        sy += s * y;
      }
    alpha = sy < 0 ? std::clamp(ss / (-sy), 1e-9, 1e5) : std::min(alpha * 2.0, 1e5);

    tau = std::move(trial);
    grad = std::move(ev_t.gradient);
    phi = phi_t;
    hist[hist_pos] = phi;
    hist_pos = (hist_pos + 1) % M;

    // Ascent has flattened out well below the tolerances that matter; stop
    // burning iterations on the last few ulps.
    if (phi > best_phi + 1e-9 * (1.0 + std::abs(best_phi))) {
      best_phi = phi;
      stale = 0;
    } else if (++stale >= 25) {
      break;
    }
  }
}

StartOutcome run_start(ObjectiveF& obj, TypeAssignment tau, const GrowthOptions& opts,
                       double target) {
  int m = obj.m();
  StartOutcome out;
  project_feasible(tau, target, m);

  // Feasibility rescue: blend toward the symmetric start until the inner
  // problems accept the point.
  {
    ObjectiveEval probe = obj.eval(tau, false);
    if (!probe.feasible) {
      std::size_t b_v = obj.base().vars();
      double delta = 1.0 - target / static_cast<double>(b_v);
      TypeAssignment nat = natural_start(b_v, m, delta);
      for (int k = 0; k < 6 && !probe.feasible; ++k) {
        for (std::size_t v = 0; v < tau.size(); ++v)
          for (std::size_t w = 0; w < tau[v].size(); ++w)
            tau[v][w] = 0.5 * (tau[v][w] + nat[v][w]);
        project_feasible(tau, target, m);
        obj.reset_state();
        probe = obj.eval(tau, false);
      }
      if (!probe.feasible) return out;
    }
  }

  spg_maximize(obj, tau, opts, target);

  repair_zero_mass(tau, target, m);
  ObjectiveEval final_ev = obj.eval(tau, false);
  if (!final_ev.feasible) return out;
  out.feasible = true;
  out.F = final_ev.value;
  out.tau = std::move(tau);
  return out;
}

DeltaSolve solve_delta(const ObjectiveF& proto, double delta, const GrowthOptions& opts,
                       const TypeAssignment* warm) {
  std::size_t b_v = proto.base().vars();
  int m = proto.m();
  double target = static_cast<double>(b_v) * (1.0 - delta);
  std::uint64_t point_salt = std::bit_cast<std::uint64_t>(delta);

  int starts = std::max(1, opts.starts);
  // Random starts rarely escape the all-weights basin, so each pure weight
  // class also gets a deterministic corner start (mass on 0 and one w only).
  // On chain bases (columns ordered by position) the optimum can concentrate
  // its support on a run of consecutive positions; prefix-window starts cover
  // those basins, and cyclic symmetry makes a prefix as good as any arc.
  std::vector<int> windows;
  for (int c = 2; c < static_cast<int>(b_v) && c <= 16; c += (c < 8 ? 1 : 2))
    if (delta * static_cast<double>(b_v) / c <= 0.9) windows.push_back(c);
  int total = starts + m + static_cast<int>(windows.size()) * m;
  std::vector<StartOutcome> outcomes(total);
  parallel_for(static_cast<std::size_t>(total), opts.threads, [&](std::size_t s) {
    ObjectiveF obj(proto);
    obj.inner_opts = opts.inner;
    TypeAssignment t0;
    if (s == 0) {
      if (warm != nullptr) {
        t0 = *warm;
        repair_zero_mass(t0, target, m);
      } else {
        t0 = natural_start(b_v, m, delta);
      }
    } else if (s >= static_cast<std::size_t>(starts + m)) {
      int k = static_cast<int>(s) - starts - m;
      int c = windows[k / m];
      int wstar = k % m + 1;
      double x = delta * static_cast<double>(b_v) / c;
      t0.assign(b_v, std::vector<double>(m + 1, 0));
      for (std::size_t v = 0; v < b_v; ++v) {
        if (static_cast<int>(v) < c) {
          t0[v][0] = 1.0 - x;
          t0[v][wstar] = x;
        } else {
          t0[v][0] = 1.0;
        }
      }
      repair_zero_mass(t0, target, m);
    } else if (s >= static_cast<std::size_t>(starts)) {
      int wstar = static_cast<int>(s) - starts + 1;
      double x = std::min(delta, 0.999);
      t0.assign(b_v, std::vector<double>(m + 1, 0));
      for (std::size_t v = 0; v < b_v; ++v) {
        t0[v][0] = 1.0 - x;
        t0[v][wstar] = x;
      }
      repair_zero_mass(t0, target, m);
    } else {
      Rng rng(mix_seed(mix_seed(opts.seed, point_salt), s));
      t0 = random_start(rng, b_v, m, delta);
    }
    outcomes[s] = run_start(obj, std::move(t0), opts, target);
  });

  DeltaSolve best;
  best.delta = delta;
  best.starts_used = total;
  int best_idx = -1;
  for (int s = 0; s < total; ++s) {
    if (!outcomes[s].feasible) continue;
    if (best_idx < 0 || outcomes[s].F > outcomes[best_idx].F) best_idx = s;
  }
  if (best_idx >= 0) {
    best.feasible = true;
    best.r = outcomes[best_idx].F / static_cast<double>(b_v);
    best.argmax = std::move(outcomes[best_idx].tau);
  }
  return best;
}

} // namespace

DeltaSolve growth_rate_at_delta(const BaseMatrix& B, int m, double delta,
                                const GrowthOptions& opts) {
  ObjectiveF proto(B, m);
  proto.inner_opts = opts.inner;
  return solve_delta(proto, delta, opts, nullptr);
}

GrowthCurve zero_crossing(const BaseMatrix& B, int m, const GrowthOptions& opts) {
  GrowthCurve curve;
  curve.grid_step = opts.grid_step;
  curve.bisect_tol = opts.bisect_tol;

  ObjectiveF proto(B, m);
  proto.inner_opts = opts.inner;

  GrowthOptions wide = opts;
  wide.starts = opts.starts * 2;

  bool seen_below = false;
  TypeAssignment warm;
  bool have_warm = false;
  DeltaSolve prev;
  bool have_prev = false;

  for (int k = 1; static_cast<double>(k) * opts.grid_step <= opts.delta_max + 1e-12; ++k) {
    double delta = static_cast<double>(k) * opts.grid_step;
    DeltaSolve cur = solve_delta(proto, delta, opts, have_warm ? &warm : nullptr);

    if (have_prev && cur.feasible && prev.feasible &&
        std::abs(cur.r - prev.r) > opts.jump_threshold &&
        std::max(cur.r, prev.r) > -10.0 * opts.jump_threshold) {
      // Possibly an under-resolved sample on either side; retry both with
      // doubled starts (a superset of the original set, so values only
      // improve). Far below zero the curve is steep by nature and large steps
      // between samples are expected, so retries are limited to the stretch
      // where the sign change can hide.
      DeltaSolve prev2 = solve_delta(proto, prev.delta, wide, nullptr);
      if (prev2.feasible && prev2.r > prev.r) {
        prev = prev2;
        curve.samples.back() = prev;
      }
      cur = solve_delta(proto, delta, wide, have_warm ? &warm : nullptr);
    }

    curve.samples.push_back(cur);
    if (cur.feasible) {
      warm = cur.argmax;
      have_warm = true;
    }

    if (cur.feasible && cur.r >= 0) {
      if (!seen_below) {
        curve.zero_crossing = 0.0;
        return curve;
      }
      double lo = prev.delta, hi = delta;
      while (hi - lo > opts.bisect_tol) {
        double mid = 0.5 * (lo + hi);
        DeltaSolve s = solve_delta(proto, mid, opts, have_warm ? &warm : nullptr);
        curve.samples.push_back(s);
        if (s.feasible) {
          warm = s.argmax;
          have_warm = true;
        }
        if (s.feasible && s.r >= 0)
          hi = mid;
        else
          lo = mid;
      }
      curve.zero_crossing = 0.5 * (lo + hi);
      return curve;
    }

    if (cur.feasible && cur.r < -opts.zero_tol) seen_below = true;
    prev = cur;
    have_prev = cur.feasible;
  }
  return curve;
}

} // namespace scpseudo
