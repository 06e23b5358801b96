#include <doctest.h>

#include <algorithm>

#include "mlkit/errors.hpp"
#include "mlkit/group.hpp"
#include "oracles.hpp"

using namespace mlkit;

namespace {

GroupPoint pt(const char* text) { return GroupPoint::parse(text); }
const GroupBackend kMinus2 = GroupBackend::curve(0, -2);
const GroupBackend kPlus1 = GroupBackend::curve(0, 1);
const GroupBackend kCongruent = GroupBackend::curve(-1, 0);
const GroupBackend kCircle = GroupBackend::circle();

oracle::Pt to_oracle(const GroupPoint& p) {
  return p.is_identity() ? oracle::Pt{} : oracle::Pt::at(p.x().value(), p.y().value());
}

}  // namespace

TEST_CASE("validate") {
  CHECK_NOTHROW(validate(kMinus2));
  CHECK_NOTHROW(validate(kCircle));
  try {
    validate(GroupBackend::curve(0, 0));
    FAIL("singular curve accepted");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("4a^3+27b^2") != std::string::npos);
  }
  CHECK(kMinus2.discriminant_term() == Rational(108));
}

TEST_CASE("on_variety") {
  CHECK(on_variety(kMinus2, pt("(3, 5)")));
  CHECK_FALSE(on_variety(kMinus2, pt("(2, 1)")));
  CHECK(on_variety(kCircle, pt("(3/5, 4/5)")));
  CHECK(on_variety(kCircle, GroupPoint::identity()));
}

TEST_CASE("point text round trip") {
  CHECK(pt("(129/100,-383/1000)").str() == "(129/100, -383/1000)");
  CHECK(pt(" O ").is_identity());
  CHECK_THROWS_AS(pt("(1, 2"), InputError);
  CHECK_THROWS_AS(pt("(a, 2)"), InputError);
}

TEST_CASE("add examples") {
  const GroupPoint p = pt("(3, 5)");
  CHECK(add(kMinus2, p, GroupPoint::identity()) == p);
  CHECK(add(kMinus2, p, p) == pt("(129/100, -383/1000)"));
  CHECK(add(kCircle, pt("(3/5, 4/5)"), pt("(3/5, 4/5)")) == pt("(-7/25, 24/25)"));
  CHECK(add(kCircle, pt("(3/5, 4/5)"), pt("(3/5, -4/5)")).is_identity());
  CHECK(normalize(kCircle, pt("(1, 0)")).is_identity());
  CHECK_THROWS_AS(add(kMinus2, p, pt("(2, 1)")), InputError);
}

TEST_CASE("scalar_mul examples") {
  CHECK(scalar_mul(kMinus2, 0, pt("(3, 5)")).is_identity());
  CHECK(scalar_mul(kPlus1, 2, pt("(0, 1)")) == pt("(0, -1)"));
  CHECK(scalar_mul(kPlus1, 6, pt("(2, 3)")).is_identity());
  CHECK(scalar_mul(kMinus2, -2, pt("(3, 5)")) == pt("(129/100, 383/1000)"));
  // 2-torsion doubles to the identity.
  CHECK(scalar_mul(kCongruent, 2, pt("(0, 0)")).is_identity());
}

TEST_CASE("naive_height") {
  CHECK(naive_height(GroupPoint::identity()) == 0);
  CHECK(naive_height(pt("(3, 5)")) == 3);
  CHECK(naive_height(pt("(129/100, -383/1000)")) == 129);
}

TEST_CASE("enumerate_rational_points examples") {
  const auto c1 = enumerate_rational_points(kPlus1, 2);
  for (const char* s : {"(-1, 0)", "(0, 1)", "(0, -1)", "(2, 3)", "(2, -3)", "O"}) {
    CHECK(std::find(c1.begin(), c1.end(), pt(s)) != c1.end());
  }
  CHECK(c1.size() == 6);
  const auto circ = enumerate_rational_points(kCircle, 1);
  CHECK(circ.size() == 4);  // identity plus (-1,0), (0,1), (0,-1)
  const auto m2 = enumerate_rational_points(kMinus2, 2);
  REQUIRE(m2.size() == 1);
  CHECK(m2.front().is_identity());
  CHECK(std::is_sorted(c1.begin(), c1.end(), point_order_less));
}

TEST_CASE("enumeration agrees with a direct scan") {
  // Every x = u/v in range with a rational y must appear, and nothing else.
  const auto pts = enumerate_rational_points(kMinus2, 30);
  long expected = 1;
  for (long v = 1; v <= 30; ++v) {
    for (long u = -30; u <= 30; ++u) {
      if (std::gcd(std::abs(u), v) != 1) continue;
      const mpq_class x(u, v);
      const mpq_class rhs = x * x * x - 2;
      const mpz_class n = rhs.get_num(), d = rhs.get_den();
      if (n < 0) continue;
      const mpz_class rn = oracle::isqrt_floor(n), rd = oracle::isqrt_floor(d);
      if (rn * rn == n && rd * rd == d) expected += n == 0 ? 1 : 2;
    }
  }
  CHECK(static_cast<long>(pts.size()) == expected);
  for (const auto& p : pts) CHECK(on_variety(kMinus2, p));
}

TEST_CASE("real components and identity component") {
  CHECK(real_components(kPlus1) == 1);
  CHECK(real_components(kCongruent) == 2);
  CHECK(real_components(kCircle) == 1);
  CHECK(component_of(kCongruent, GroupPoint::identity()));
  CHECK_FALSE(component_of(kCongruent, pt("(0, 0)")));
  CHECK_FALSE(component_of(kCongruent, pt("(-1, 0)")));
  CHECK(component_of(kCongruent, pt("(1, 0)")));
  const auto [lo, hi] = largest_root_bracket(kCongruent, 20);
  CHECK(lo <= Rational(1));
  CHECK(Rational(1) <= hi);
}

TEST_CASE("identity component is a subgroup of index at most 2") {
  const GroupBackend c = GroupBackend::curve(-7, 6);  // roots -3, 1, 2
  REQUIRE(real_components(c) == 2);
  const auto pts = enumerate_rational_points(c, 12);
  std::size_t in_h = 0;
  for (const auto& p : pts) {
    if (component_of(c, p)) ++in_h;
    for (const auto& q : pts) {
      if (component_of(c, p) && component_of(c, q)) CHECK(component_of(c, add(c, p, q)));
      // Two points off H sum into H.
      if (!component_of(c, p) && !component_of(c, q)) CHECK(component_of(c, add(c, p, q)));
    }
  }
  CHECK(2 * in_h >= pts.size());
}

TEST_CASE("group laws on enumerated points of height <= 20") {
  for (const GroupBackend& b : {kPlus1, kMinus2, kCircle}) {
    const auto pts = enumerate_rational_points(b, 20);
    for (const auto& p : pts) {
      CHECK(add(b, p, GroupPoint::identity()) == p);
      CHECK(add(b, p, negate(b, p)).is_identity());
      for (const auto& q : pts) {
        const GroupPoint pq = add(b, p, q);
        CHECK(on_variety(b, pq));
        CHECK(pq == add(b, q, p));
        for (const auto& r : pts) CHECK(add(b, pq, r) == add(b, p, add(b, q, r)));
      }
    }
  }
}

TEST_CASE("group law agrees with an independent implementation") {
  const oracle::Curve oc{-7, 6};
  const GroupBackend c = GroupBackend::curve(-7, 6);
  const auto pts = enumerate_rational_points(c, 12);
  for (const auto& p : pts) {
    for (const auto& q : pts) CHECK(to_oracle(add(c, p, q)) == oc.add(to_oracle(p), to_oracle(q)));
  }
  const oracle::Circle og;
  const auto cps = enumerate_rational_points(kCircle, 30);
  for (const auto& p : cps) {
    for (const auto& q : cps) CHECK(to_oracle(add(kCircle, p, q)) == og.add(to_oracle(p), to_oracle(q)));
  }
}

TEST_CASE("scalar_mul matches repeated addition") {
  const GroupPoint p = pt("(3, 5)");
  GroupPoint acc = GroupPoint::identity();
  for (long k = 0; k <= 12; ++k) {
    CHECK(scalar_mul(kMinus2, k, p) == acc);
    CHECK(scalar_mul(kMinus2, -k, p) == negate(kMinus2, acc));
    acc = add(kMinus2, acc, p);
  }
}

TEST_CASE("torsion examples") {
  const TorsionGroup t1 = torsion_subgroup(kPlus1);
  CHECK(t1.invariant_factors == std::vector<long>{6});
  REQUIRE(t1.generators.size() == 1);
  CHECK((t1.generators[0] == pt("(2, 3)") || t1.generators[0] == pt("(2, -3)")));
  CHECK(t1.str() == "Z/6");
  CHECK(torsion_subgroup(kMinus2).invariant_factors.empty());
  CHECK(torsion_subgroup(kMinus2).str() == "trivial");
  const TorsionGroup tc = torsion_subgroup(kCircle);
  CHECK(tc.invariant_factors == std::vector<long>{4});
  CHECK(tc.generators[0] == pt("(0, 1)"));
  CHECK(torsion_subgroup(kCongruent).str() == "Z/2 x Z/2");
}

TEST_CASE("torsion generators have their stated order") {
  for (const GroupBackend& b : {kPlus1, kCongruent, kCircle, GroupBackend::curve(-43, 166), GroupBackend::curve(0, -432)}) {
    const TorsionGroup t = torsion_subgroup(b);
    for (std::size_t i = 0; i < t.generators.size(); ++i) {
      const long d = t.invariant_factors[i];
      CHECK(scalar_mul(b, d, t.generators[i]).is_identity());
      for (long e = 1; e < d; ++e) CHECK_FALSE(scalar_mul(b, e, t.generators[i]).is_identity());
    }
    CHECK(static_cast<long>(torsion_points(b).size()) == t.order());
  }
}

TEST_CASE("torsion agrees with a brute-force Nagell-Lutz oracle") {
  for (long a = -6; a <= 6; ++a) {
    for (long b = -8; b <= 8; ++b) {
      if (4 * a * a * a + 27 * b * b == 0) continue;
      const GroupBackend c = GroupBackend::curve(a, b);
      const auto expected = oracle::nagell_lutz_torsion(a, b);
      auto got = torsion_points(c);
      std::vector<oracle::Pt> mapped;
      for (const auto& p : got) mapped.push_back(to_oracle(p));
      std::sort(mapped.begin(), mapped.end());
      CHECK_MESSAGE(mapped == expected, "curve a=" << a << " b=" << b);
    }
  }
  // y^2 = x^3 - 43x + 166 has Z/7 torsion.
  CHECK(torsion_subgroup(GroupBackend::curve(-43, 166)).invariant_factors == std::vector<long>{7});
}

TEST_CASE("torsion of rational-coefficient curves uses the integral model") {
  // y^2 = x^3 + 1/64 is y'^2 = x'^3 + 1 scaled by u = 2: same Z/6.
  const GroupBackend c = GroupBackend::curve(0, Rational::parse("1/64"));
  const TorsionGroup t = torsion_subgroup(c);
  CHECK(t.invariant_factors == std::vector<long>{6});
  for (const auto& p : torsion_points(c)) CHECK(on_variety(c, p));
}

TEST_CASE("circle torsion agrees with an oracle") {
  const auto expected = oracle::circle_torsion(25);
  auto got = torsion_points(kCircle);
  std::vector<oracle::Pt> mapped;
  for (const auto& p : got) mapped.push_back(to_oracle(p));
  std::sort(mapped.begin(), mapped.end());
  CHECK(mapped == expected);
}
