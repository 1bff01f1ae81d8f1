#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "padml/heights.hpp"

using namespace padml;

namespace {
const std::vector<std::string> X{"x"};
const std::vector<std::string> XYZ{"x", "y", "z"};

mpq_class rand_rational(std::mt19937_64& rng) {
  long num = static_cast<long>(rng() % 20001) - 10000;
  long den = static_cast<long>(rng() % 999) + 1;
  mpq_class q(num, den);
  q.canonicalize();
  return q;
}
}  // namespace

TEST_CASE("weil height basics") {
  CHECK(HeightValue::of_rational(mpq_class(1)).value == 0.0);
  CHECK(HeightValue::of_rational(mpq_class(-1)).value == 0.0);
  CHECK(HeightValue::of_rational(mpq_class(0)).value == 0.0);
  CHECK(HeightValue::infinity_point().value == 0.0);
  for (long n = 1; n <= 100; ++n) {
    HeightValue h = HeightValue::of_rational(mpq_class(n));
    CHECK(h.num == n);
    CHECK(h.den == 1);
    CHECK(h.value == doctest::Approx(std::log(static_cast<double>(n))).epsilon(1e-12));
  }
  // 5! + 1 = 121
  CHECK(HeightValue::of_rational(mpq_class(121)).value ==
        doctest::Approx(std::log(121.0)).epsilon(1e-12));
}

TEST_CASE("height symmetry and additivity on exact pairs") {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 1000; ++i) {
    mpq_class a = rand_rational(rng);
    mpq_class b = rand_rational(rng);
    if (a != 0) {
      HeightValue ha = HeightValue::of_rational(a);
      HeightValue hinv = HeightValue::of_rational(1 / a);
      // h(t) = h(1/t) exactly: the reduced pair swaps
      mpz_class ma = std::max(mpz_class(abs(ha.num)), ha.den);
      mpz_class mi = std::max(mpz_class(abs(hinv.num)), hinv.den);
      CHECK(ma == mi);
    }
    // h(a+b) <= h(a) + h(b) + log 2, checked as an exact integer inequality:
    // max(|num|, den)(a+b) <= 2 * H(a) * H(b)
    mpq_class s = a + b;
    HeightValue hs = HeightValue::of_rational(s);
    HeightValue ha = HeightValue::of_rational(a);
    HeightValue hb = HeightValue::of_rational(b);
    mpz_class lhs = std::max(mpz_class(abs(hs.num)), hs.den);
    mpz_class rhs = 2 * std::max(mpz_class(abs(ha.num)), ha.den) *
                    std::max(mpz_class(abs(hb.num)), hb.den);
    CHECK(lhs <= rhs);
    // multiplicativity slack: h(ab) <= h(a) + h(b)
    mpq_class m = a * b;
    HeightValue hm = HeightValue::of_rational(m);
    mpz_class lhs2 = std::max(mpz_class(abs(hm.num)), hm.den);
    mpz_class rhs2 = std::max(mpz_class(abs(ha.num)), ha.den) *
                     std::max(mpz_class(abs(hb.num)), hb.den);
    CHECK(lhs2 <= rhs2);
  }
}

TEST_CASE("count_height_le basics") {
  CHECK(count_height_le(1) == 3);  // -1, 0, 1
  long prev = count_height_le(1);
  // c0 = 2 holds from N = 2 on; N = 1 gives 3 > 2 for any correct count.
  for (long n = 2; n <= 40; ++n) {
    long c = count_height_le(n);
    CHECK(c >= prev);
    CHECK(c < 2 * n * n);
    prev = c;
  }
  CHECK_THROWS_AS(count_height_le(0), Error);
  CHECK_THROWS_AS(count_height_le(100000), Error);
}

TEST_CASE("count_height_le matches an independent enumeration") {
  // transposed double loop, written independently of the library's
  for (long N : {1L, 2L, 10L, 57L, 200L}) {
    long oracle = 0;
    for (long a = -N; a <= N; ++a)
      for (long b = 1; b <= N; ++b)
        if (std::gcd(a < 0 ? -a : a, b) == 1) oracle++;
    CHECK(count_height_le(N) == oracle);
  }
  // asymptotic constant 12/pi^2
  double ratio = static_cast<double>(count_height_le(200)) / (200.0 * 200.0);
  CHECK(ratio > 1.15);
  CHECK(ratio < 1.28);
}

TEST_CASE("gap ratios for the translation map are exactly 1") {
  PolyMap map = parse_map({"x+1"}, X);
  Polynomial id = Polynomial::variable(0, X);
  Polynomial one = Polynomial::constant(1, X);
  GapReport report = gap_ratio_series(map, {mpq_class(0)}, id, one, 500);
  for (const auto& rec : report.records) {
    CHECK(rec.defined);
    if (rec.n >= 1) {
      CHECK(rec.height.num == rec.n);
      CHECK(rec.height.den == 1);
    }
    if (rec.has_ratio) CHECK(rec.ratio == 1.0);
  }
  CHECK(report.classification == GapClassification::POSITIVE_LIMSUP_WITNESSED);
  TailSummary tail = limsup_liminf_summary(report);
  CHECK(tail.max_tail_ratio == 1.0);
  CHECK(tail.min_tail_ratio == 1.0);
}

TEST_CASE("gap report for the factorial counterexample") {
  PolyMap map = parse_map({"y*z", "x*z", "z+1"}, XYZ);
  Polynomial f = Polynomial::parse("x + 1", XYZ);
  Polynomial one = Polynomial::constant(1, XYZ);
  RationalPoint c{mpq_class(0), mpq_class(1), mpq_class(1)};
  GapReport report = gap_ratio_series(map, c, f, one, 25);
  double last_odd_ratio = 0.0;
  for (const auto& rec : report.records) {
    CHECK(rec.defined);
    if (rec.n % 2 == 0) {
      CHECK(rec.height.num == 1);  // f(Phi^{2n}(c)) = 1
      CHECK(rec.height.value == 0.0);
    } else if (rec.n >= 5) {
      CHECK(rec.ratio > last_odd_ratio);
      last_odd_ratio = rec.ratio;
    }
  }
  CHECK(report.classification == GapClassification::POSITIVE_LIMSUP_WITNESSED);
}

TEST_CASE("constant observable classifies as finite image") {
  PolyMap map = parse_map({"x+1"}, X);
  Polynomial cf = Polynomial::constant(1, X);
  Polynomial one = Polynomial::constant(1, X);
  GapReport report = gap_ratio_series(map, {mpq_class(0)}, cf, one, 100);
  CHECK(report.classification == GapClassification::FINITE_IMAGE_SUSPECTED);
  CHECK(report.distinct_values == 1);
  TailSummary tail = limsup_liminf_summary(report);
  CHECK(tail.max_tail_ratio == 0.0);
  CHECK(tail.min_tail_ratio == 0.0);
}

TEST_CASE("undefined indices are excluded") {
  // f = x/x is [0:0] exactly at the origin
  PolyMap map = parse_map({"x+1"}, X);
  Polynomial id = Polynomial::variable(0, X);
  GapReport report = gap_ratio_series(map, {mpq_class(0)}, id, id, 50);
  CHECK_FALSE(report.records[0].defined);
  CHECK(report.records[1].defined);
}

TEST_CASE("poles map to the infinity point with height 0") {
  // f = 1/(x - 3) passes through [1:0] at n = 3
  PolyMap map = parse_map({"x+1"}, X);
  Polynomial num = Polynomial::constant(1, X);
  Polynomial den = Polynomial::parse("x - 3", X);
  GapReport report = gap_ratio_series(map, {mpq_class(0)}, num, den, 20);
  CHECK(report.records[3].defined);
  CHECK(report.records[3].height.num == 1);
  CHECK(report.records[3].height.den == 0);
  CHECK(report.records[3].height.value == 0.0);
  CHECK(report.records[4].height.num == 1);  // 1/(4-3)
  CHECK(report.records[4].height.den == 1);
}
