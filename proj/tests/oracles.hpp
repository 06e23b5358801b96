// Independent reference implementations used to cross-check the library.
// Nothing here calls into mlkit's group law, Smith form or coset code.
#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace oracle {

// ---------------------------------------------------------------------------
// Plane points on y^2 = x^3 + a x + b (curve) or x^2 + y^2 = 1 (circle).

struct Pt {
  bool inf = true;
  mpq_class x, y;

  static Pt at(mpq_class x, mpq_class y) {
    Pt p;
    p.inf = false;
    p.x = std::move(x);
    p.y = std::move(y);
    p.x.canonicalize();
    p.y.canonicalize();
    return p;
  }
  bool operator==(const Pt& o) const { return inf == o.inf && (inf || (x == o.x && y == o.y)); }
  bool operator<(const Pt& o) const {
    if (inf != o.inf) return inf;
    if (inf) return false;
    if (x != o.x) return x < o.x;
    return y < o.y;
  }
  std::string str() const { return inf ? "O" : "(" + x.get_str() + ", " + y.get_str() + ")"; }
};

struct Curve {
  mpq_class a, b;
  Pt add(const Pt& p, const Pt& q) const {
    if (p.inf) return q;
    if (q.inf) return p;
    mpq_class lambda;
    if (p.x == q.x) {
      if (p.y + q.y == 0) return Pt{};
      lambda = (3 * p.x * p.x + a) / (2 * p.y);
    } else {
      lambda = (q.y - p.y) / (q.x - p.x);
    }
    mpq_class x3 = lambda * lambda - p.x - q.x;
    mpq_class y3 = lambda * (p.x - x3) - p.y;
    return Pt::at(x3, y3);
  }
  Pt neg(const Pt& p) const { return p.inf ? p : Pt::at(p.x, -p.y); }
  bool on(const Pt& p) const { return p.inf || p.y * p.y == p.x * p.x * p.x + a * p.x + b; }
};

// The circle group written multiplicatively as complex numbers x + iy;
// the point (1, 0) is the identity.
struct Circle {
  Pt add(const Pt& p, const Pt& q) const {
    const mpq_class px = p.inf ? mpq_class(1) : p.x, py = p.inf ? mpq_class(0) : p.y;
    const mpq_class qx = q.inf ? mpq_class(1) : q.x, qy = q.inf ? mpq_class(0) : q.y;
    mpq_class x = px * qx - py * qy;
    mpq_class y = px * qy + py * qx;
    if (x == 1 && y == 0) return Pt{};
    return Pt::at(x, y);
  }
  Pt neg(const Pt& p) const { return p.inf ? p : Pt::at(p.x, -p.y); }
  bool on(const Pt& p) const { return p.inf || p.x * p.x + p.y * p.y == 1; }
};

template <typename G>
std::optional<int> order_at_most(const G& g, const Pt& p, int max_order) {
  Pt acc = p;
  for (int k = 1; k <= max_order; ++k) {
    if (acc.inf) return k;
    acc = g.add(acc, p);
  }
  return std::nullopt;
}

inline mpz_class isqrt_floor(const mpz_class& n) {
  mpz_class r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

// Torsion points of y^2 = x^3 + a x + b with integer a, b, by brute force:
// candidates have integer coordinates with y = 0 or y^2 | 4a^3 + 27b^2, and
// are kept when their order is at most 12.
inline std::vector<Pt> nagell_lutz_torsion(long a, long b) {
  const Curve c{a, b};
  const mpz_class disc = 4 * mpz_class(a) * a * a + 27 * mpz_class(b) * b;
  const mpz_class abs_disc = abs(disc);
  std::vector<Pt> out{Pt{}};
  const mpz_class ymax = isqrt_floor(abs_disc);
  for (mpz_class y = 0; y <= ymax; ++y) {
    if (y != 0 && abs_disc % (y * y) != 0) continue;
    // Integer roots of x^3 + a x + (b - y^2): |x| <= 1 + max(|a|, |b - y^2|).
    const mpz_class c0 = mpz_class(b) - y * y;
    const mpz_class bound = 1 + std::max(mpz_class(abs(mpz_class(a))), mpz_class(abs(c0)));
    for (mpz_class x = -bound; x <= bound; ++x) {
      if (x * x * x + a * x + c0 != 0) continue;
      for (const mpz_class& yy : {y, mpz_class(-y)}) {
        const Pt p = Pt::at(mpq_class(x), mpq_class(yy));
        if (order_at_most(c, p, 12)) out.push_back(p);
        if (y == 0) break;
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Rational points of the circle with denominator <= max_den and finite order.
inline std::vector<Pt> circle_torsion(long max_den) {
  const Circle g;
  std::set<Pt> found{Pt{}};
  for (long den = 1; den <= max_den; ++den) {
    for (long num = -den; num <= den; ++num) {
      const mpq_class x(num, den);
      mpq_class x2 = x;
      x2.canonicalize();
      const mpq_class rest = 1 - x2 * x2;
      const mpz_class n = rest.get_num(), d = rest.get_den();
      const mpz_class rn = isqrt_floor(n), rd = isqrt_floor(d);
      if (rn * rn != n || rd * rd != d) continue;
      for (int s : {1, -1}) {
        const Pt p = Pt::at(x2, mpq_class(rn * s, rd));
        if (p.x == 1 && p.y == 0) continue;
        if (order_at_most(g, p, 12)) found.insert(p);
      }
    }
  }
  return {found.begin(), found.end()};
}

// ---------------------------------------------------------------------------
// Smith normal form by textbook elementary operations (invariant factors only).

using Mat = std::vector<std::vector<mpz_class>>;

inline std::vector<mpz_class> snf_diagonal(Mat m) {
  const std::size_t rows = m.size();
  const std::size_t cols = rows ? m[0].size() : 0;
  std::vector<mpz_class> diag;
  for (std::size_t t = 0; t < std::min(rows, cols); ++t) {
    for (;;) {
      // Smallest nonzero entry in the trailing block becomes the pivot.
      std::size_t pi = rows, pj = cols;
      for (std::size_t i = t; i < rows; ++i) {
        for (std::size_t j = t; j < cols; ++j) {
          if (m[i][j] != 0 && (pi == rows || abs(m[i][j]) < abs(m[pi][pj]))) {
            pi = i;
            pj = j;
          }
        }
      }
      if (pi == rows) {
        // Block is zero.
        while (diag.size() < std::min(rows, cols)) diag.push_back(0);
        goto done;
      }
      std::swap(m[t], m[pi]);
      for (auto& row : m) std::swap(row[t], row[pj]);
      bool clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        const mpz_class q = m[i][t] / m[t][t];
        for (std::size_t j = t; j < cols; ++j) m[i][j] -= q * m[t][j];
        if (m[i][t] != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        const mpz_class q = m[t][j] / m[t][t];
        for (std::size_t i = t; i < rows; ++i) m[i][j] -= q * m[i][t];
        if (m[t][j] != 0) clean = false;
      }
      if (!clean) continue;
      // Divisibility: fold any row whose entry the pivot does not divide.
      bool divides = true;
      for (std::size_t i = t + 1; i < rows && divides; ++i) {
        for (std::size_t j = t + 1; j < cols; ++j) {
          if (m[i][j] % m[t][t] != 0) {
            for (std::size_t jj = t; jj < cols; ++jj) m[t][jj] += m[i][jj];
            divides = false;
            break;
          }
        }
      }
      if (divides) break;
    }
    diag.push_back(abs(m[t][t]));
  }
done:
  return diag;
}

// Determinant by cofactor expansion (small matrices only).
inline mpz_class det_naive(const Mat& m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  if (n == 1) return m[0][0];
  mpz_class sum = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (m[0][j] == 0) continue;
    Mat minor;
    for (std::size_t i = 1; i < n; ++i) {
      std::vector<mpz_class> row;
      for (std::size_t c = 0; c < n; ++c) {
        if (c != j) row.push_back(m[i][c]);
      }
      minor.push_back(std::move(row));
    }
    const mpz_class term = m[0][j] * det_naive(minor);
    sum += (j % 2 == 0) ? term : mpz_class(-term);
  }
  return sum;
}

// Invariant factors from determinantal divisors: d_k = gcd of k x k minors.
inline std::vector<mpz_class> invariant_factors_by_minors(const Mat& m) {
  const std::size_t rows = m.size();
  const std::size_t cols = rows ? m[0].size() : 0;
  std::vector<mpz_class> divisors{1};
  auto subsets = [](std::size_t n, std::size_t k) {
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    if (k > n) return out;
    for (;;) {
      out.push_back(idx);
      std::size_t i = k;
      while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
      if (i == 0) break;
      ++idx[i - 1];
      for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
    return out;
  };
  for (std::size_t k = 1; k <= std::min(rows, cols); ++k) {
    mpz_class g = 0;
    for (const auto& rs : subsets(rows, k)) {
      for (const auto& cs : subsets(cols, k)) {
        Mat sub;
        for (std::size_t i : rs) {
          std::vector<mpz_class> row;
          for (std::size_t j : cs) row.push_back(m[i][j]);
          sub.push_back(std::move(row));
        }
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), mpz_class(det_naive(sub)).get_mpz_t());
      }
    }
    divisors.push_back(g);
  }
  std::vector<mpz_class> factors;
  for (std::size_t k = 1; k < divisors.size(); ++k) {
    factors.push_back(divisors[k - 1] == 0 ? mpz_class(0) : mpz_class(divisors[k] / divisors[k - 1]));
  }
  return factors;
}

inline Mat random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols, long lo, long hi) {
  std::uniform_int_distribution<long> dist(lo, hi);
  Mat m(rows, std::vector<mpz_class>(cols));
  for (auto& row : m) {
    for (auto& v : row) v = dist(rng);
  }
  return m;
}

// ---------------------------------------------------------------------------
// Coset oracle for Gamma = Z: membership straight from the definition.

inline long mod(long a, long m) { return ((a % m) + m) % m; }

// v in chi_k^{-1}(e Z) iff sum k_j v_j is divisible by e; only v mod e matters.
inline bool in_dke_z(const std::vector<long>& k, long e, const std::vector<long>& v) {
  long s = 0;
  for (std::size_t j = 0; j < k.size(); ++j) s += k[j] * v[j];
  return mod(s, e) == 0;
}

// All vectors of (Z/l)^n.
inline std::vector<std::vector<long>> all_residues(std::size_t n, long l) {
  std::vector<std::vector<long>> out;
  std::vector<long> v(n, 0);
  for (;;) {
    out.push_back(v);
    std::size_t i = n;
    while (i > 0) {
      --i;
      if (++v[i] < l) break;
      v[i] = 0;
      if (i == 0) return out;
    }
    if (n == 0) return out;
  }
}

}  // namespace oracle
