#include "scpseudo/base_matrix.hpp"

#include <numeric>
#include <stdexcept>

#include "scpseudo/errors.hpp"

#include "json.hpp"

namespace scpseudo {

Rational::Rational(long long num, long long den) : num_(num), den_(den) {
  if (den_ == 0) throw std::invalid_argument("Rational: zero denominator");
  if (den_ < 0) {
    num_ = -num_;
    den_ = -den_;
  }
  long long g = std::gcd(num_ < 0 ? -num_ : num_, den_);
  if (g > 1) {
    num_ /= g;
    den_ /= g;
  }
}

Rational Rational::operator+(const Rational& o) const {
  return Rational(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

Rational Rational::operator-(const Rational& o) const {
  return Rational(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
}

Rational Rational::operator*(const Rational& o) const {
  return Rational(num_ * o.num_, den_ * o.den_);
}

bool Rational::operator<(const Rational& o) const {
  return num_ * o.den_ < o.num_ * den_;
}

std::string Rational::to_string() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

BaseMatrix::BaseMatrix(std::size_t b_c, std::size_t b_v)
    : b_c_(b_c), b_v_(b_v), e_(b_c * b_v, 0) {
  if (b_c == 0 || b_v == 0)
    throw std::invalid_argument("BaseMatrix: dimensions must be positive");
}

BaseMatrix BaseMatrix::from_rows(const std::vector<std::vector<int>>& rows) {
  if (rows.empty() || rows.front().empty())
    throw std::invalid_argument("BaseMatrix: dimensions must be positive");
  BaseMatrix B(rows.size(), rows.front().size());
  for (std::size_t x = 0; x < rows.size(); ++x) {
    if (rows[x].size() != B.b_v_)
      throw std::invalid_argument("BaseMatrix: ragged rows");
    for (std::size_t y = 0; y < B.b_v_; ++y) {
      if (rows[x][y] < 0)
        throw std::invalid_argument("BaseMatrix: negative multiplicity");
      B.at(x, y) = rows[x][y];
    }
  }
  return B;
}

int BaseMatrix::var_degree(std::size_t y) const {
  int q = 0;
  for (std::size_t x = 0; x < b_c_; ++x) q += at(x, y);
  return q;
}

int BaseMatrix::check_degree(std::size_t x) const {
  int d = 0;
  for (std::size_t y = 0; y < b_v_; ++y) d += at(x, y);
  return d;
}

std::size_t BaseMatrix::edge_count() const {
  std::size_t n = 0;
  for (int v : e_) n += static_cast<std::size_t>(v);
  return n;
}

std::vector<std::vector<int>> BaseMatrix::to_rows() const {
  std::vector<std::vector<int>> rows(b_c_, std::vector<int>(b_v_));
  for (std::size_t x = 0; x < b_c_; ++x)
    for (std::size_t y = 0; y < b_v_; ++y) rows[x][y] = at(x, y);
  return rows;
}

std::uint64_t BaseMatrix::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint64_t v) {
    h ^= v;
    h *= 0x100000001b3ULL;
  };
  mix(b_c_);
  mix(b_v_);
  for (int v : e_) mix(static_cast<std::uint64_t>(v));
  return h;
}

BaseMatrix EdgeSpreading::sum() const {
  BaseMatrix total = components.front();
  for (std::size_t i = 1; i < components.size(); ++i) {
    const BaseMatrix& c = components[i];
    if (c.checks() != total.checks() || c.vars() != total.vars())
      throw std::invalid_argument("EdgeSpreading: component shapes disagree");
    for (std::size_t x = 0; x < total.checks(); ++x)
      for (std::size_t y = 0; y < total.vars(); ++y) total.at(x, y) += c.at(x, y);
  }
  return total;
}

bool validate_spreading(const BaseMatrix& B, const EdgeSpreading& spreading) {
  if (spreading.components.empty())
    throw std::invalid_argument("validate_spreading: no components");
  for (const BaseMatrix& c : spreading.components)
    if (c.checks() != B.checks() || c.vars() != B.vars())
      throw std::invalid_argument("validate_spreading: component shape differs from B");
  return spreading.sum() == B;
}

BaseMatrix terminated_base(const EdgeSpreading& spreading, std::size_t L) {
  if (L < 1) throw std::invalid_argument("terminated_base: L must be >= 1");
  std::size_t ms = spreading.memory();
  std::size_t b_c = spreading.checks(), b_v = spreading.vars();
  BaseMatrix out((L + ms) * b_c, L * b_v);
  for (std::size_t t = 0; t < L; ++t)
    for (std::size_t i = 0; i <= ms; ++i) {
      const BaseMatrix& Bi = spreading.components[i];
      for (std::size_t x = 0; x < b_c; ++x)
        for (std::size_t y = 0; y < b_v; ++y)
          out.at((t + i) * b_c + x, t * b_v + y) += Bi.at(x, y);
    }
  return out;
}

BaseMatrix tailbiting_base(const EdgeSpreading& spreading, std::size_t lambda) {
  std::size_t ms = spreading.memory();
  if (lambda < 1 || lambda < ms)
    throw std::invalid_argument("tailbiting_base: lambda must be >= max(1, ms)");
  std::size_t b_c = spreading.checks(), b_v = spreading.vars();
  BaseMatrix term = terminated_base(spreading, lambda);
  BaseMatrix out(lambda * b_c, lambda * b_v);
  for (std::size_t r = 0; r < (lambda + ms) * b_c; ++r)
    for (std::size_t c = 0; c < lambda * b_v; ++c)
      out.at(r % (lambda * b_c), c) += term.at(r, c);
  return out;
}

Rational design_rate(const EdgeSpreading& spreading, CouplingKind kind, std::size_t factor) {
  long long b_c = static_cast<long long>(spreading.checks());
  long long b_v = static_cast<long long>(spreading.vars());
  long long ms = static_cast<long long>(spreading.memory());
  if (kind == CouplingKind::terminated) {
    long long L = static_cast<long long>(factor);
    if (L < 1) throw std::invalid_argument("design_rate: L must be >= 1");
    return Rational(1, 1) - Rational((L + ms) * b_c, L * b_v);
  }
  return Rational(1, 1) - Rational(b_c, b_v);
}

namespace {

BaseMatrix matrix_from_rows_json(const nlohmann::json& rows, const char* where) {
  if (!rows.is_array() || rows.empty())
    throw std::invalid_argument(std::string(where) + ": expected a nonempty array of rows");
  std::vector<std::vector<int>> r;
  for (const auto& row : rows) {
    if (!row.is_array())
      throw std::invalid_argument(std::string(where) + ": row is not an array");
    r.push_back(row.get<std::vector<int>>());
  }
  return BaseMatrix::from_rows(r);
}

} // namespace

EdgeSpreading spreading_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  if (!j.contains("components"))
    throw std::invalid_argument("spreading JSON: missing field \"components\"");
  EdgeSpreading s;
  for (const auto& comp : j.at("components"))
    s.components.push_back(matrix_from_rows_json(comp, "components"));
  if (s.components.empty())
    throw std::invalid_argument("spreading JSON: \"components\" is empty");
  for (const BaseMatrix& c : s.components)
    if (c.checks() != s.checks() || c.vars() != s.vars())
      throw std::invalid_argument("spreading JSON: component shapes disagree");
  if (j.contains("b_c") && j.at("b_c").get<std::size_t>() != s.checks())
    throw std::invalid_argument("spreading JSON: field \"b_c\" disagrees with components");
  if (j.contains("b_v") && j.at("b_v").get<std::size_t>() != s.vars())
    throw std::invalid_argument("spreading JSON: field \"b_v\" disagrees with components");
  if (j.contains("m_s") && j.at("m_s").get<std::size_t>() != s.memory())
    throw std::invalid_argument("spreading JSON: field \"m_s\" disagrees with components");
  return s;
}

std::string spreading_to_json(const EdgeSpreading& spreading) {
  nlohmann::json j;
  j["b_c"] = spreading.checks();
  j["b_v"] = spreading.vars();
  j["m_s"] = spreading.memory();
  nlohmann::json comps = nlohmann::json::array();
  for (const BaseMatrix& c : spreading.components) comps.push_back(c.to_rows());
  j["components"] = comps;
  return j.dump();
}

BaseMatrix base_matrix_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  if (!j.contains("rows"))
    throw std::invalid_argument("matrix JSON: missing field \"rows\"");
  BaseMatrix B = matrix_from_rows_json(j.at("rows"), "rows");
  if (j.contains("b_c") && j.at("b_c").get<std::size_t>() != B.checks())
    throw std::invalid_argument("matrix JSON: field \"b_c\" disagrees with rows");
  if (j.contains("b_v") && j.at("b_v").get<std::size_t>() != B.vars())
    throw std::invalid_argument("matrix JSON: field \"b_v\" disagrees with rows");
  return B;
}

std::string base_matrix_to_json(const BaseMatrix& B) {
  nlohmann::json j;
  j["b_c"] = B.checks();
  j["b_v"] = B.vars();
  j["rows"] = B.to_rows();
  return j.dump();
}

} // namespace scpseudo
