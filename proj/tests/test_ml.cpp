#include <doctest.h>

#include <random>
#include <set>

#include "mlkit/errors.hpp"
#include "mlkit/formula.hpp"
#include "mlkit/ml_checker.hpp"
#include "oracles.hpp"

using namespace mlkit;

namespace {

const GroupBackend kMinus2 = GroupBackend::curve(0, -2);
GammaSpec gamma_p() { return GammaSpec::from_generators(kMinus2, {GroupPoint::parse("(3, 5)")}); }

Tuple zero_tuple(std::size_t n) { return Tuple(n, Coords{{0}, {}}); }

MultiPoly poly(const char* text) { return parse_polynomial(text, 4); }

std::set<std::pair<long, long>> free_pairs(const std::vector<Tuple>& ts) {
  std::set<std::pair<long, long>> out;
  for (const auto& t : ts) out.insert({t[0].free[0], t[1].free[0]});
  return out;
}

// Independent re-check of a counterexample against the claimed decomposition.
bool revalidates(const GammaSpec& g, const MultiPoly& p, const MLDecomposition& d, const Verdict& v) {
  const auto points = realize_tuple(g, v.witness);
  if (points != v.witness_points) return false;
  const auto value = eval_at_tuple(p, points);
  if (!value) return false;
  bool in_union = false;
  for (const auto& pair : d) {
    const auto base_points = realize_tuple(g, pair.base);
    if (character_value(g.backend(), pair.k, points) == character_value(g.backend(), pair.k, base_points)) {
      in_union = true;
    }
  }
  if (v.direction == Verdict::Direction::kMissingFromUnion) return *value == 0 && !in_union;
  return *value != 0 && in_union;
}

}  // namespace

TEST_CASE("solutions_bounded examples") {
  const GammaSpec g = gamma_p();
  const SolutionSet all = solutions_bounded(g, MultiPoly(4), 2, 2);
  CHECK(all.solutions.size() + all.skipped.size() == 25);
  CHECK(all.skipped.empty());

  const SolutionSet diag = solutions_bounded(g, poly("(- x1 x3)"), 2, 3);
  CHECK(diag.solutions.size() == 12);
  std::set<std::pair<long, long>> expected;
  for (long m = -3; m <= 3; ++m) {
    if (m != 0) {
      expected.insert({m, m});
      expected.insert({m, -m});
    }
  }
  CHECK(free_pairs(diag.solutions) == expected);

  CHECK(solutions_bounded(g, parse_polynomial("x2", 2), 1, 6).solutions.empty());
  CHECK_THROWS_AS(solutions_bounded(g, poly("x1"), 1, 2), InputError);
}

TEST_CASE("solutions_bounded agrees with a chord-tangent oracle") {
  const GammaSpec g = gamma_p();
  const oracle::Curve c{0, -2};
  const oracle::Pt p = oracle::Pt::at(3, 5);
  std::vector<oracle::Pt> multiples;
  auto mult = [&](long m) {
    oracle::Pt acc;
    const oracle::Pt step = m < 0 ? c.neg(p) : p;
    for (long i = 0; i < std::abs(m); ++i) acc = c.add(acc, step);
    return acc;
  };
  const MultiPoly q = poly("(- (+ x2 x4) 0)");
  std::set<std::pair<long, long>> expected;
  for (long a = -3; a <= 3; ++a) {
    for (long b = -3; b <= 3; ++b) {
      const oracle::Pt pa = mult(a), pb = mult(b);
      if (pa.inf || pb.inf) continue;
      if (pa.y + pb.y == 0) expected.insert({a, b});
    }
  }
  CHECK(free_pairs(solutions_bounded(g, q, 2, 3).solutions) == expected);
}

TEST_CASE("solutions are monotone in the bound") {
  const GammaSpec g = gamma_p();
  for (const char* text : {"(- x1 x3)", "(+ x2 x4)", "(* (- x1 x3) (- x2 5))"}) {
    const MultiPoly q = poly(text);
    std::set<std::pair<long, long>> prev;
    for (long b = 0; b <= 4; ++b) {
      const auto cur = free_pairs(solutions_bounded(g, q, 2, b).solutions);
      for (const auto& s : prev) CHECK(cur.count(s) == 1);
      prev = cur;
    }
  }
}

TEST_CASE("verify_decomposition examples") {
  const GammaSpec g = gamma_p();
  const MultiPoly q = poly("(- x1 x3)");
  const MLDecomposition both{{zero_tuple(2), {1, -1}}, {zero_tuple(2), {1, 1}}};
  const Verdict ok = verify_decomposition(g, q, 2, both, 5);
  CHECK(ok.verified());
  CHECK(ok.str() == "verified(bound=5)");
  for (long b = 0; b <= 5; ++b) CHECK(verify_decomposition(g, q, 2, both, b).verified());

  for (const auto& k : {std::vector<long>{1, -1}, std::vector<long>{1, 1}}) {
    const MLDecomposition one{{zero_tuple(2), k}};
    const Verdict v = verify_decomposition(g, q, 2, one, 5);
    REQUIRE(v.kind == Verdict::Kind::kCounterexample);
    CHECK(v.direction == Verdict::Direction::kMissingFromUnion);
    CHECK(revalidates(g, q, one, v));
  }
  const MLDecomposition first{{zero_tuple(2), {1, -1}}};
  CHECK(verify_decomposition(g, q, 2, first, 5).str() == "counterexample: missing-from-union ((3, 5), (3, -5))");

  const MLDecomposition axis{{zero_tuple(2), {1, 0}}};
  const Verdict v = verify_decomposition(g, q, 2, axis, 5);
  REQUIRE(v.kind == Verdict::Kind::kCounterexample);
  CHECK(revalidates(g, q, axis, v));
}

TEST_CASE("not-a-solution counterexamples") {
  const GammaSpec g = gamma_p();
  const MultiPoly q = poly("(- x1 x3)");
  // The full group pair claims every tuple is a solution.
  const MLDecomposition all{{zero_tuple(2), {0, 0}}};
  const Verdict v = verify_decomposition(g, q, 2, all, 3);
  REQUIRE(v.kind == Verdict::Kind::kCounterexample);
  CHECK(v.direction == Verdict::Direction::kNotASolution);
  CHECK(revalidates(g, q, all, v));
  // Shifted diagonal: P + ker(1,-1) contains (2P, P), not a solution.
  const Tuple shifted{Coords{{1}, {}}, Coords{{0}, {}}};
  const MLDecomposition bad{{zero_tuple(2), {1, -1}}, {zero_tuple(2), {1, 1}}, {shifted, {1, -1}}};
  const Verdict w = verify_decomposition(g, q, 2, bad, 3);
  REQUIRE(w.kind == Verdict::Kind::kCounterexample);
  CHECK(w.direction == Verdict::Direction::kNotASolution);
  CHECK(revalidates(g, q, bad, w));
}

TEST_CASE("suggest_decomposition examples") {
  const GammaSpec g = gamma_p();
  const Suggestion none = suggest_decomposition(g, poly("(- (^ x1 2) -1)"), 2, 3);
  CHECK(none.verdict.verified());
  CHECK(none.decomposition.empty());

  const MultiPoly q = poly("(- x1 x3)");
  const Suggestion s = suggest_decomposition(g, q, 2, 4);
  REQUIRE(s.verdict.verified());
  std::set<std::vector<long>> ks;
  for (const auto& pair : s.decomposition) ks.insert(pair.k);
  CHECK(ks == std::set<std::vector<long>>{{1, -1}, {1, 1}});
  CHECK(verify_decomposition(g, q, 2, s.decomposition, 4).verified());

  // 2P = (129/100, -383/1000): pin both coordinates with a sum of squares.
  const std::vector<MultiPoly> parts{parse_polynomial("(- x1 129/100)", 2), parse_polynomial("(- x2 -383/1000)", 2)};
  const MultiPoly pin = sum_of_squares_combine(parts);
  const Suggestion single = suggest_decomposition(g, pin, 1, 4);
  REQUIRE(single.verdict.verified());
  REQUIRE(single.decomposition.size() == 1);
  CHECK(single.decomposition[0].base[0].free[0] == 2);
  CHECK(single.decomposition[0].k == std::vector<long>{1});
}

TEST_CASE("suggestions re-verify independently") {
  const GammaSpec g = gamma_p();
  for (const char* text : {"(+ x2 x4)", "(- x2 x4)", "(* (- x1 x3) (+ x2 x4))", "(- x1 3)", "(* (- x1 3) (- x3 3))"}) {
    const MultiPoly q = poly(text);
    const Suggestion s = suggest_decomposition(g, q, 2, 3);
    if (s.verdict.verified()) {
      CHECK(verify_decomposition(g, q, 2, s.decomposition, 3).verified());
    } else {
      CHECK(s.decomposition.empty());
      CHECK(s.verdict.kind == Verdict::Kind::kInconclusive);
    }
  }
}

TEST_CASE("sum of squares cuts out the intersection") {
  const GammaSpec g = gamma_p();
  const std::vector<const char*> pool{"(- x1 x3)", "(+ x2 x4)", "(- x2 x4)", "(- x1 3)", "(- x3 3)",
                                      "(- x2 5)",  "(* (- x1 x3) (- x2 x4))", "0", "(- x4 -5)"};
  std::mt19937_64 rng(83);
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  std::uniform_int_distribution<long> scale(1, 3);
  for (int trial = 0; trial < 30; ++trial) {
    const MultiPoly a = poly(pool[pick(rng)]) * MultiPoly::constant(4, scale(rng));
    const MultiPoly b = poly(pool[pick(rng)]);
    const std::vector<MultiPoly> both{a, b};
    const auto sa = free_pairs(solutions_bounded(g, a, 2, 3).solutions);
    const auto sb = free_pairs(solutions_bounded(g, b, 2, 3).solutions);
    std::set<std::pair<long, long>> inter;
    for (const auto& s : sa) {
      if (sb.count(s)) inter.insert(s);
    }
    CHECK(free_pairs(solutions_bounded(g, sum_of_squares_combine(both), 2, 3).solutions) == inter);
  }
}

TEST_CASE("identity convention") {
  const GammaSpec g = gamma_p();
  const SolutionSet s = solutions_bounded(g, parse_polynomial("(- x1 3)", 4), 2, 1);
  // Slot 2 is unused, so (+-P, O) counts; slot 1 at the identity is skipped.
  CHECK(s.solutions.size() == 6);
  CHECK(s.skipped.size() == 3);
  const std::vector<GroupPoint> with_identity{GroupPoint::identity(), GroupPoint::parse("(3, 5)")};
  CHECK_FALSE(eval_at_tuple(poly("(- x1 x3)"), with_identity));
  CHECK(eval_at_tuple(poly("(- x3 3)"), with_identity) == Rational(0));
}
