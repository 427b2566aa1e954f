#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "scpseudo/base_matrix.hpp"
#include "scpseudo/growth.hpp"

namespace scpseudo {

struct SweepPoint {
  CouplingKind kind = CouplingKind::tailbiting;
  int factor = 0;
  int m = 1;
  bool has_crossing = false;
  double delta_min = 0;
  double bound = 0;
};

struct FreeGrowthRateReport {
  std::vector<SweepPoint> points;
  std::optional<double> best_lower;
  std::optional<double> best_upper;
  std::optional<int> coincide_at;
  std::optional<double> delta_free;
  double tol = 2e-3;
  std::string bound_scaling = "delta_min*factor/(m_s+1)";
};

// File-backed memo for zero-crossing solves, keyed on the base matrix and
// every solver parameter that affects the result.
class SolveCache {
 public:
  SolveCache() = default;
  explicit SolveCache(std::string path);

  static std::uint64_t key(const BaseMatrix& B, int m, const GrowthOptions& opts);

  bool lookup(std::uint64_t key, double& delta_min, bool& has_crossing) const;
  void store(std::uint64_t key, double delta_min, bool has_crossing);
  void save() const;
  std::size_t size() const { return entries_.size(); }

 private:
  std::string path_;
  std::map<std::uint64_t, std::pair<double, bool>> entries_;
};

std::optional<double> tailbiting_growth_rate(const EdgeSpreading& spreading, int lambda,
                                             int m, const GrowthOptions& opts = {});
std::optional<double> terminated_growth_rate(const EdgeSpreading& spreading, int L, int m,
                                             const GrowthOptions& opts = {});

FreeGrowthRateReport free_growth_rate_bounds(const EdgeSpreading& spreading, int m,
                                             int factor_lo, int factor_hi,
                                             double tol = 2e-3,
                                             const GrowthOptions& opts = {},
                                             SolveCache* cache = nullptr);

} // namespace scpseudo
