#include "scpseudo/sweep.hpp"

#include <bit>
#include <cmath>
#include <fstream>

#include "json.hpp"

#include "scpseudo/rng.hpp"

namespace scpseudo {

SolveCache::SolveCache(std::string path) : path_(std::move(path)) {
  std::ifstream in(path_);
  if (!in) return;
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error&) {
    return;
  }
  if (!j.contains("entries") || !j["entries"].is_array()) return;
  for (const auto& e : j["entries"]) {
    if (!e.contains("key") || !e.contains("delta_min") || !e.contains("has_crossing"))
      continue;
    std::uint64_t k = std::stoull(e["key"].get<std::string>());
    entries_[k] = {e["delta_min"].get<double>(), e["has_crossing"].get<bool>()};
  }
}

std::uint64_t SolveCache::key(const BaseMatrix& B, int m, const GrowthOptions& opts) {
  std::uint64_t k = B.hash();
  k = mix_seed(k, static_cast<std::uint64_t>(m));
  k = mix_seed(k, static_cast<std::uint64_t>(opts.starts));
  k = mix_seed(k, opts.seed);
  k = mix_seed(k, std::bit_cast<std::uint64_t>(opts.grid_step));
  k = mix_seed(k, std::bit_cast<std::uint64_t>(opts.bisect_tol));
  k = mix_seed(k, std::bit_cast<std::uint64_t>(opts.delta_max));
  return k;
}

bool SolveCache::lookup(std::uint64_t key, double& delta_min, bool& has_crossing) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return false;
  delta_min = it->second.first;
  has_crossing = it->second.second;
  return true;
}

void SolveCache::store(std::uint64_t key, double delta_min, bool has_crossing) {
  entries_[key] = {delta_min, has_crossing};
  save();
}

void SolveCache::save() const {
  if (path_.empty()) return;
  nlohmann::json j;
  j["entries"] = nlohmann::json::array();
  for (const auto& [k, v] : entries_) {
    j["entries"].push_back({{"key", std::to_string(k)},
                            {"delta_min", v.first},
                            {"has_crossing", v.second}});
  }
  std::ofstream out(path_);
  out << j.dump(1) << '\n';
}

namespace {

std::pair<double, bool> solve_crossing(const BaseMatrix& B, int m,
                                       const GrowthOptions& opts, SolveCache* cache) {
  std::uint64_t k = SolveCache::key(B, m, opts);
  double d = 0;
  bool has = false;
  if (cache != nullptr && cache->lookup(k, d, has)) return {d, has};
  GrowthCurve curve = zero_crossing(B, m, opts);
  has = curve.zero_crossing.has_value();
  d = has ? *curve.zero_crossing : 0.0;
  if (cache != nullptr) cache->store(k, d, has);
  return {d, has};
}

} // namespace

std::optional<double> tailbiting_growth_rate(const EdgeSpreading& spreading, int lambda,
                                             int m, const GrowthOptions& opts) {
  return zero_crossing(tailbiting_base(spreading, lambda), m, opts).zero_crossing;
}

std::optional<double> terminated_growth_rate(const EdgeSpreading& spreading, int L, int m,
                                             const GrowthOptions& opts) {
  return zero_crossing(terminated_base(spreading, L), m, opts).zero_crossing;
}

FreeGrowthRateReport free_growth_rate_bounds(const EdgeSpreading& spreading, int m,
                                             int factor_lo, int factor_hi, double tol,
                                             const GrowthOptions& opts, SolveCache* cache) {
  FreeGrowthRateReport report;
  report.tol = tol;
  int ms = spreading.memory();
  double denom = static_cast<double>(ms + 1);

  for (int f = factor_lo; f <= factor_hi; ++f) {
    std::optional<SweepPoint> lower, upper;
    if (f >= std::max(1, ms)) {
      auto [d, has] = solve_crossing(tailbiting_base(spreading, f), m, opts, cache);
      SweepPoint p{CouplingKind::tailbiting, f, m, has, d, d * f / denom};
      report.points.push_back(p);
      if (has) lower = p;
    }
    if (f >= 1) {
      auto [d, has] = solve_crossing(terminated_base(spreading, f), m, opts, cache);
      SweepPoint p{CouplingKind::terminated, f, m, has, d, d * f / denom};
      report.points.push_back(p);
      if (has) upper = p;
    }

    if (lower && (!report.best_lower || lower->bound > *report.best_lower))
      report.best_lower = lower->bound;
    if (upper && (!report.best_upper || upper->bound < *report.best_upper))
      report.best_upper = upper->bound;

    if (lower && upper && !report.coincide_at &&
        std::abs(upper->bound - lower->bound) < tol) {
      report.coincide_at = f;
      report.delta_free = 0.5 * (lower->bound + upper->bound);
    }
  }
  return report;
}

} // namespace scpseudo
