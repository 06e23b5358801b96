#include "mlkit/ml_checker.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "mlkit/errors.hpp"
#include "mlkit/smith.hpp"

namespace mlkit {

namespace {

void check_arity(const MultiPoly& p, std::size_t n) {
  if (n == 0) throw InputError("n must be at least 1");
  if (p.arity() != 2 * n) {
    throw InputError("polynomial has arity " + std::to_string(p.arity()) + " but n = " + std::to_string(n) +
                     " needs " + std::to_string(2 * n));
  }
}

std::string points_str(const std::vector<GroupPoint>& pts) {
  std::string s = "(";
  for (std::size_t i = 0; i < pts.size(); ++i) s += (i ? ", " : "") + pts[i].str();
  return s + ")";
}

enum class Status { kNonSolution, kSolution, kSkipped };

struct BoxScan {
  std::vector<Tuple> tuples;
  std::vector<std::vector<GroupPoint>> points;
  std::vector<Status> status;
};

BoxScan scan_box(const GammaSpec& gamma, const MultiPoly& p, std::size_t n, long bound, double ceiling) {
  check_arity(p, n);
  const GammaBox box(gamma, bound, ceiling);
  BoxScan scan;
  std::vector<GroupPoint> pts(n);
  box.for_each_tuple(
      n,
      [&](std::span<const std::size_t> slots) {
        Tuple t(n);
        for (std::size_t j = 0; j < n; ++j) {
          t[j] = box.coords(slots[j]);
          pts[j] = box.point(slots[j]);
        }
        const auto value = eval_at_tuple(p, pts);
        scan.status.push_back(!value ? Status::kSkipped : (value->is_zero() ? Status::kSolution : Status::kNonSolution));
        scan.tuples.push_back(std::move(t));
        scan.points.push_back(pts);
        return true;
      },
      ceiling);
  return scan;
}

}  // namespace

std::optional<Rational> eval_at_tuple(const MultiPoly& p, std::span<const GroupPoint> points) {
  check_arity(p, points.size());
  std::vector<Rational> values;
  values.reserve(2 * points.size());
  for (std::size_t j = 0; j < points.size(); ++j) {
    if (points[j].is_identity()) {
      if (p.uses_variable(2 * j) || p.uses_variable(2 * j + 1)) return std::nullopt;
      values.emplace_back();
      values.emplace_back();
    } else {
      values.push_back(points[j].x());
      values.push_back(points[j].y());
    }
  }
  return p.eval(values);
}

SolutionSet solutions_bounded(const GammaSpec& gamma, const MultiPoly& p, std::size_t n, long bound, double ceiling) {
  const BoxScan scan = scan_box(gamma, p, n, bound, ceiling);
  SolutionSet out;
  out.bound = bound;
  for (std::size_t i = 0; i < scan.tuples.size(); ++i) {
    if (scan.status[i] == Status::kSolution) out.solutions.push_back(scan.tuples[i]);
    if (scan.status[i] == Status::kSkipped) out.skipped.push_back(scan.tuples[i]);
  }
  return out;
}

std::string decomposition_str(const MLDecomposition& d) {
  if (d.empty()) return "{}";
  std::string s = "{";
  for (std::size_t i = 0; i < d.size(); ++i) {
    s += i ? ", (" : "(";
    s += tuple_str(d[i].base) + ", k=[";
    for (std::size_t j = 0; j < d[i].k.size(); ++j) s += (j ? ", " : "") + std::to_string(d[i].k[j]);
    s += "])";
  }
  return s + "}";
}

const char* direction_name(Verdict::Direction d) {
  return d == Verdict::Direction::kMissingFromUnion ? "missing-from-union" : "not-a-solution";
}

std::string Verdict::str() const {
  switch (kind) {
    case Kind::kVerified: return "verified(bound=" + std::to_string(bound) + ")";
    case Kind::kCounterexample:
      return std::string("counterexample: ") + direction_name(direction) + " " + points_str(witness_points);
    case Kind::kInconclusive: break;
  }
  return "inconclusive: " + reason;
}

Verdict verify_decomposition(const GammaSpec& gamma, const MultiPoly& p, std::size_t n, const MLDecomposition& d,
                             long bound, double ceiling) {
  check_arity(p, n);
  const GroupShape shape = gamma.shape();
  std::vector<Coords> targets;
  for (const KernelCoset& pair : d) {
    if (pair.base.size() != n || pair.k.size() != n) throw InputError("decomposition pair has the wrong arity");
    targets.push_back(character_value(shape, pair.k, pair.base));
  }
  auto in_union = [&](const Tuple& t) {
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (character_value(shape, d[i].k, t) == targets[i]) return true;
    }
    return false;
  };

  Verdict v;
  v.bound = bound;
  auto counterexample = [&](Verdict::Direction dir, Tuple t, std::vector<GroupPoint> pts) {
    v.kind = Verdict::Kind::kCounterexample;
    v.direction = dir;
    v.witness = std::move(t);
    v.witness_points = std::move(pts);
    return v;
  };

  const GammaBox box(gamma, bound, ceiling);
  std::vector<GroupPoint> pts(n);
  Tuple t(n);
  bool found = false;
  box.for_each_tuple(
      n,
      [&](std::span<const std::size_t> slots) {
        for (std::size_t j = 0; j < n; ++j) {
          t[j] = box.coords(slots[j]);
          pts[j] = box.point(slots[j]);
        }
        const auto value = eval_at_tuple(p, pts);
        if (!value) {
          ++v.skipped;
          return true;
        }
        const bool solution = value->is_zero();
        if (solution != in_union(t)) {
          counterexample(solution ? Verdict::Direction::kMissingFromUnion : Verdict::Direction::kNotASolution, t, pts);
          found = true;
          return false;
        }
        return true;
      },
      ceiling);
  if (found) return v;

  // Bases outside the box are still required to be solutions.
  for (const KernelCoset& pair : d) {
    const auto base_points = realize_tuple(gamma, pair.base);
    const auto value = eval_at_tuple(p, base_points);
    if (value && !value->is_zero()) {
      return counterexample(Verdict::Direction::kNotASolution, pair.base, base_points);
    }
  }
  v.kind = Verdict::Kind::kVerified;
  return v;
}

namespace {

// First nonzero entry positive.
std::vector<long> sign_normalized(std::vector<long> k) {
  for (long v : k) {
    if (v == 0) continue;
    if (v < 0) {
      for (long& x : k) x = -x;
    }
    break;
  }
  return k;
}

bool primitive(const std::vector<long>& k) {
  long g = 0;
  for (long v : k) g = std::gcd(g, v);
  return g == 1;
}

constexpr long kCandidateRange = 3;

}  // namespace

Suggestion suggest_decomposition(const GammaSpec& gamma, const MultiPoly& p, std::size_t n, long bound,
                                 double ceiling) {
  const BoxScan scan = scan_box(gamma, p, n, bound, ceiling);
  const GroupShape shape = gamma.shape();
  const std::size_t r = shape.rank;

  std::vector<std::size_t> solutions;
  for (std::size_t i = 0; i < scan.tuples.size(); ++i) {
    if (scan.status[i] == Status::kSolution) solutions.push_back(i);
  }

  std::vector<std::vector<long>> small;
  for (auto& k : ordered_box(n, kCandidateRange, ceiling)) {
    if (primitive(k) && sign_normalized(k) == k) small.push_back(std::move(k));
  }

  // The coset s + ker(chi_k) fits when none of its box members is a
  // non-solution; skipped tuples are neutral.
  auto fits = [&](const std::vector<long>& k, const Coords& target) {
    for (std::size_t i = 0; i < scan.tuples.size(); ++i) {
      if (scan.status[i] == Status::kNonSolution && character_value(shape, k, scan.tuples[i]) == target) return false;
    }
    return true;
  };

  MLDecomposition decomposition;
  std::vector<bool> covered(scan.tuples.size(), false);
  std::vector<Tuple> unexplained;
  for (std::size_t s : solutions) {
    if (covered[s]) continue;
    const Tuple& base = scan.tuples[s];

    std::vector<std::vector<long>> candidates{std::vector<long>(n, 0)};
    // Characters annihilating every difference to the other solutions: the
    // whole solution set in one coset if any exist.
    if (r > 0) {
      IntMatrix diffs(solutions.size() * r, n);
      for (std::size_t a = 0; a < solutions.size(); ++a) {
        const Tuple& t = scan.tuples[solutions[a]];
        for (std::size_t i = 0; i < r; ++i) {
          for (std::size_t j = 0; j < n; ++j) diffs.at(a * r + i, j) = t[j].free[i] - base[j].free[i];
        }
      }
      for (const IntVector& v : integer_kernel(diffs)) {
        if (std::all_of(v.begin(), v.end(), [](const Integer& x) { return x.fits_slong_p(); })) {
          std::vector<long> k;
          for (const Integer& x : v) k.push_back(x.get_si());
          candidates.push_back(sign_normalized(std::move(k)));
        }
      }
    }
    candidates.insert(candidates.end(), small.begin(), small.end());

    bool placed = false;
    for (const auto& k : candidates) {
      const Coords target = character_value(shape, k, base);
      if (!fits(k, target)) continue;
      for (std::size_t i = 0; i < scan.tuples.size(); ++i) {
        if (scan.status[i] == Status::kSolution && character_value(shape, k, scan.tuples[i]) == target) covered[i] = true;
      }
      decomposition.push_back({base, k});
      placed = true;
      break;
    }
    if (!placed) unexplained.push_back(base);
  }

  Suggestion out;
  if (!unexplained.empty()) {
    out.verdict.kind = Verdict::Kind::kInconclusive;
    out.verdict.bound = bound;
    out.verdict.reason = std::to_string(unexplained.size()) + " solution(s) fit no candidate coset";
    out.verdict.unexplained = std::move(unexplained);
    return out;
  }
  out.verdict = verify_decomposition(gamma, p, n, decomposition, bound, ceiling);
  if (out.verdict.verified()) {
    out.decomposition = std::move(decomposition);
  } else {
    const Verdict failed = out.verdict;
    out.verdict = Verdict{};
    out.verdict.kind = Verdict::Kind::kInconclusive;
    out.verdict.bound = bound;
    out.verdict.reason = "candidate decomposition failed verification: " + failed.str();
    out.verdict.unexplained.push_back(failed.witness);
  }
  return out;
}

}  // namespace mlkit
