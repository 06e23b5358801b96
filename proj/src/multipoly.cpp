#include "mlkit/multipoly.hpp"

#include <algorithm>
#include <numeric>

#include "mlkit/errors.hpp"

namespace mlkit {

bool GrlexDescending::operator()(const Exponent& a, const Exponent& b) const {
  const unsigned da = std::accumulate(a.begin(), a.end(), 0u);
  const unsigned db = std::accumulate(b.begin(), b.end(), 0u);
  if (da != db) return da > db;
  return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

MultiPoly MultiPoly::constant(std::size_t arity, const Rational& c) {
  MultiPoly p(arity);
  p.add_term(Exponent(arity, 0), c);
  return p;
}

MultiPoly MultiPoly::variable(std::size_t arity, std::size_t index) {
  if (index >= arity) throw InputError("variable index out of range");
  MultiPoly p(arity);
  Exponent e(arity, 0);
  e[index] = 1;
  p.add_term(std::move(e), Rational(1));
  return p;
}

unsigned MultiPoly::total_degree() const {
  if (terms_.empty()) return 0;
  const Exponent& lead = terms_.begin()->first;
  return std::accumulate(lead.begin(), lead.end(), 0u);
}

bool MultiPoly::uses_variable(std::size_t index) const {
  return std::any_of(terms_.begin(), terms_.end(),
                     [index](const auto& t) { return t.first[index] != 0; });
}

void MultiPoly::add_term(Exponent exponent, const Rational& coeff) {
  if (exponent.size() != arity_) throw InputError("exponent length does not match arity");
  if (coeff.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(std::move(exponent), coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

void MultiPoly::check_compatible(const MultiPoly& o) const {
  if (arity_ != o.arity_) {
    throw InputError("polynomial arity mismatch: " + std::to_string(arity_) + " vs " +
                     std::to_string(o.arity_));
  }
}

MultiPoly MultiPoly::operator-() const {
  MultiPoly r(*this);
  for (auto& [e, c] : r.terms_) c = -c;
  return r;
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& o) {
  check_compatible(o);
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& o) {
  check_compatible(o);
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
  a.check_compatible(b);
  MultiPoly r(a.arity_);
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      Exponent e(ea);
      for (std::size_t i = 0; i < e.size(); ++i) e[i] += eb[i];
      r.add_term(std::move(e), ca * cb);
    }
  }
  return r;
}

MultiPoly MultiPoly::pow(unsigned e) const {
  MultiPoly result = constant(arity_, Rational(1));
  MultiPoly base = *this;
  while (e > 0) {
    if (e & 1u) result = result * base;
    e >>= 1;
    if (e > 0) base = base * base;
  }
  return result;
}

namespace {

// powers[i][k] = point[i]^k, filled lazily up to the needed degree.
class PowerTable {
 public:
  explicit PowerTable(std::span<const Rational> point) : point_(point), powers_(point.size()) {}

  const Rational& get(std::size_t var, unsigned k) {
    auto& row = powers_[var];
    if (row.empty()) row.emplace_back(1);
    while (row.size() <= k) row.push_back(row.back() * point_[var]);
    return row[k];
  }

 private:
  std::span<const Rational> point_;
  std::vector<std::vector<Rational>> powers_;
};

}  // namespace

Rational MultiPoly::eval(std::span<const Rational> point) const {
  if (point.size() != arity_) {
    throw InputError("evaluation point has " + std::to_string(point.size()) +
                     " coordinates, polynomial has arity " + std::to_string(arity_));
  }
  PowerTable table(point);
  Rational sum;
  for (const auto& [e, c] : terms_) {
    Rational term = c;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] != 0) term *= table.get(i, e[i]);
    }
    sum += term;
  }
  return sum;
}

MultiPoly MultiPoly::partial_evaluate(std::span<const Rational> tail) const {
  if (tail.size() > arity_) {
    throw InputError("partial evaluation with " + std::to_string(tail.size()) +
                     " values exceeds arity " + std::to_string(arity_));
  }
  const std::size_t head = arity_ - tail.size();
  PowerTable table(tail);
  MultiPoly r(head);
  for (const auto& [e, c] : terms_) {
    Rational coeff = c;
    for (std::size_t i = head; i < arity_; ++i) {
      if (e[i] != 0) coeff *= table.get(i - head, e[i]);
    }
    r.add_term(Exponent(e.begin(), e.begin() + static_cast<std::ptrdiff_t>(head)), coeff);
  }
  return r;
}

MultiPoly MultiPoly::extend(std::size_t new_arity) const {
  if (new_arity < arity_) throw InputError("cannot shrink polynomial arity");
  MultiPoly r(new_arity);
  for (const auto& [e, c] : terms_) {
    Exponent ext(e);
    ext.resize(new_arity, 0);
    r.terms_.emplace(std::move(ext), c);
  }
  return r;
}

std::string MultiPoly::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    std::string mono;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += "x" + std::to_string(i + 1);
      if (e[i] > 1) mono += "^" + std::to_string(e[i]);
    }
    const Rational mag = c.abs();
    std::string term;
    if (mono.empty()) {
      term = mag.str();
    } else if (mag == Rational(1)) {
      term = mono;
    } else {
      term = mag.str() + "*" + mono;
    }
    if (first) {
      out = (c.sign() < 0 ? "-" : "") + term;
      first = false;
    } else {
      out += (c.sign() < 0 ? " - " : " + ") + term;
    }
  }
  return out;
}

MultiPoly sum_of_squares_combine(std::span<const MultiPoly> polys) {
  if (polys.empty()) throw InputError("sum of squares needs at least one polynomial");
  MultiPoly sum(polys.front().arity());
  for (const MultiPoly& p : polys) sum += p * p;
  return sum;
}

}  // namespace mlkit
