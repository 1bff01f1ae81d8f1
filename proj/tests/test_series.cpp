#include <doctest.h>

#include <random>
#include <set>

#include "padml/series.hpp"

using namespace padml;

namespace {

PadicSeries from_ints(long p, long N, std::vector<long> cs) {
  std::vector<mpz_class> v(cs.begin(), cs.end());
  return PadicSeries(p, N, std::move(v), N);
}

// (z - a_1)...(z - a_d) * (1 + p*R(z)) over residues mod p^N.
PadicSeries strassman_family(std::mt19937_64& rng, long p, long N, int d,
                             int r_degree, std::vector<mpz_class>* roots_out) {
  mpz_class mod;
  mpz_ui_pow_ui(mod.get_mpz_t(), static_cast<unsigned long>(p),
                static_cast<unsigned long>(N));
  auto rand_residue = [&]() {
    mpz_class r = 0;
    for (long i = 0; i < N; ++i) {
      r *= p;
      r += static_cast<long>(rng() % static_cast<unsigned long>(p));
    }
    return r;
  };

  std::set<std::string> seen;
  std::vector<mpz_class> roots;
  while (static_cast<int>(roots.size()) < d) {
    mpz_class a = rand_residue();
    if (seen.insert(a.get_str()).second) roots.push_back(a);
  }
  if (roots_out) *roots_out = roots;

  std::vector<mpz_class> poly{1};  // product of (z - a_i), top-down storage
  for (const auto& a : roots) {
    std::vector<mpz_class> next(poly.size() + 1, mpz_class(0));
    for (size_t i = 0; i < poly.size(); ++i) {
      next[i + 1] += poly[i];
      next[i] -= poly[i] * a;
    }
    poly = std::move(next);
  }
  std::vector<mpz_class> unit(static_cast<size_t>(r_degree) + 1);
  unit[0] = 1;
  for (size_t i = 0; i <= static_cast<size_t>(r_degree); ++i) {
    mpz_class c = rand_residue() * p;
    if (i == 0)
      unit[0] = 1 + c;
    else
      unit[i] = c;
  }
  PadicSeries P(p, N, std::move(poly), N);
  PadicSeries U(p, N, std::move(unit), N);
  return P * U;
}

}  // namespace

TEST_CASE("gauss valuation") {
  CHECK(gauss_valuation(from_ints(5, 4, {1, 5})) == Valuation::finite(0));
  CHECK(gauss_valuation(from_ints(5, 4, {0, 5, 25})) == Valuation::finite(1));
  CHECK_THROWS_AS(gauss_valuation(from_ints(5, 4, {0, 0, 0})), Error);
}

TEST_CASE("strassman degree") {
  CHECK(strassman_degree(from_ints(5, 4, {0, -1, 1})) == 2);  // z^2 - z
  CHECK(strassman_degree(from_ints(5, 4, {1, 5, 25})) == 0);
  CHECK(strassman_degree(from_ints(5, 4, {0, 5, 25})) == 1);
  // tail floor below the attained minimum is ambiguous
  PadicSeries low_tail(5, 4, {mpz_class(25), mpz_class(125)}, 2);
  CHECK_THROWS_AS(strassman_degree(low_tail), Error);
}

TEST_CASE("strassman zero bound") {
  PadicSeries zsq = from_ints(5, 6, {0, -1, 1});
  CHECK(strassman_zero_bound(zsq, PadicInt::zero(5, 6)) == 2);
  // P = 3 + 5z + 25z^2, shift 3: P - 3 = 5z(1 + 5z), D = 1
  PadicSeries P = from_ints(5, 6, {3, 5, 25});
  CHECK(strassman_zero_bound(P, PadicInt(5, 6, 3)) == 1);
  PadicSeries constant = from_ints(5, 6, {3});
  CHECK_THROWS_AS(strassman_zero_bound(constant, PadicInt(5, 6, 3)), Error);
}

TEST_CASE("evaluate and compose") {
  PadicSeries zsq = from_ints(5, 4, {0, -1, 1});
  CHECK(zsq.evaluate(PadicInt(5, 4, 3)).residue() == 6);
  CHECK(zsq.evaluate(PadicInt::zero(5, 4)).residue() == 0);
  CHECK(from_ints(5, 4, {7}).evaluate(PadicInt(5, 4, 2)).residue() == 7);

  // z^2 at z = 5w: 25 w^2
  PadicSeries z2 = from_ints(5, 4, {0, 0, 1});
  PadicSeries composed = z2.compose_linear(PadicInt::zero(5, 4), PadicInt(5, 4, 5));
  CHECK(composed.coefficient(2).residue() == 25);
  CHECK(composed.coefficient(0).residue() == 0);
  CHECK(composed.coefficient(1).residue() == 0);
}

TEST_CASE("gauss norm is multiplicative") {
  std::mt19937_64 rng(4242);
  for (int i = 0; i < 100; ++i) {
    long p = (i % 2) ? 5 : 7;
    auto rand_series = [&](int deg) {
      std::vector<mpz_class> cs;
      for (int k = 0; k <= deg; ++k)
        cs.emplace_back(static_cast<long>(rng() % 10000));
      return PadicSeries(p, 12, std::move(cs), 12);
    };
    PadicSeries A = rand_series(3 + static_cast<int>(rng() % 3));
    PadicSeries B = rand_series(2 + static_cast<int>(rng() % 4));
    Valuation ga = gauss_valuation(A);
    Valuation gb = gauss_valuation(B);
    CHECK(gauss_valuation(A * B) == Valuation::finite(ga.value + gb.value));
  }
}

TEST_CASE("roots of z^2 - z") {
  RootList roots = zeros_in_Zp(from_ints(5, 6, {0, -1, 1}));
  REQUIRE(roots.roots.size() == 2);
  CHECK(roots.strassman_bound == 2);
  CHECK(roots.roots[0].approximation.residue() == 0);
  CHECK(roots.roots[1].approximation.residue() == 1);
  CHECK(roots.roots[0].certified_simple);
}

TEST_CASE("series without Z_p roots") {
  CHECK(zeros_in_Zp(from_ints(5, 6, {1, 5})).roots.empty());  // root -1/5
  // z^2 - 2: solvable iff 2 is a square mod 5
  CHECK(mpz_legendre(mpz_class(2).get_mpz_t(), mpz_class(5).get_mpz_t()) == -1);
  CHECK(zeros_in_Zp(from_ints(5, 6, {-2, 0, 1})).roots.empty());
  CHECK_THROWS_AS(zeros_in_Zp(from_ints(5, 6, {3})), Error);
}

TEST_CASE("subdivision separates deep root pairs") {
  // roots 2 and 2 + 125: same residue to depth 3
  mpz_class a = 2, b = 2 + 125;
  std::vector<mpz_class> poly{a * b, -(a + b), 1};
  PadicSeries P(5, 10, std::move(poly), 10);
  RootList roots = zeros_in_Zp(P);
  REQUIRE(roots.roots.size() == 2);
  CHECK(roots.roots[0].approximation.residue() == 2);
  CHECK(roots.roots[1].approximation.residue() == 127);
}

TEST_CASE("strassman suite: constructed roots are found exactly") {
  std::mt19937_64 rng(20240817);
  const long primes[3] = {5, 7, 11};
  for (int trial = 0; trial < 60; ++trial) {
    long p = primes[trial % 3];
    int d = 1 + static_cast<int>(rng() % 4);
    std::vector<mpz_class> expected;
    PadicSeries P = strassman_family(rng, p, 10, d, 3, &expected);
    CHECK(strassman_degree(P) == d);
    RootList roots = zeros_in_Zp(P);
    REQUIRE(roots.roots.size() == static_cast<size_t>(d));
    for (const auto& e : expected) {
      // each constructed root lands in exactly one reported disk
      int matched = 0;
      for (const auto& r : roots.roots) {
        mpz_class red;
        mpz_mod(red.get_mpz_t(), e.get_mpz_t(),
                r.approximation.modulus().get_mpz_t());
        if (red == r.approximation.residue()) matched++;
      }
      CHECK(matched == 1);
    }
  }
}

TEST_CASE("shifted zero bound holds on the constructed family") {
  std::mt19937_64 rng(5150);
  for (int trial = 0; trial < 30; ++trial) {
    long p = 5;
    int d = 1 + static_cast<int>(rng() % 4);
    PadicSeries P = strassman_family(rng, p, 10, d, 2, nullptr);
    long D = strassman_degree(P);
    for (int s = 0; s < 20; ++s) {
      mpz_class t(static_cast<long>(rng() % 100000));
      PadicSeries shifted = P.shift_constant(PadicInt(p, 10, -t));
      size_t count = 0;
      try {
        count = zeros_in_Zp(shifted).roots.size();
      } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::PrecisionExhausted);
        continue;
      }
      CHECK(count <= static_cast<size_t>(1 + D));
    }
  }
}

TEST_CASE("weierstrass preparation reconstructs the input") {
  // (z - 2)(1 + 5z) = -2 + (1 - 10)z + 5z^2 = -2 - 9z + 5z^2
  PadicSeries P = from_ints(5, 8, {-2, -9, 5});
  WeierstrassFactorization f = weierstrass_prep(P);
  CHECK(f.gauss_valuation == 0);
  CHECK(f.poly_part.size() == 2);  // degree 1 = D(P)
  CHECK(f.unit_part.coefficient_valuation(0).is_zero());

  // multiply back and compare on the listed range
  std::vector<mpz_class> qc;
  for (const auto& c : f.poly_part) qc.push_back(c.residue());
  PadicSeries Q(5, f.output_precision, std::move(qc), f.output_precision);
  PadicSeries residual = P - Q * f.unit_part;
  for (size_t m = 0; m <= P.truncation_degree(); ++m) {
    CHECK(residual.coefficient_valuation(m).clamped(residual.precision()) >=
          std::min<long>(f.output_precision, residual.precision()));
  }
  // |u(n)|_p = 1 on sampled naturals
  for (long n = 0; n <= 50; ++n)
    CHECK(f.unit_part.evaluate(PadicInt(5, f.output_precision, n)).valuation().is_zero());
}

TEST_CASE("weierstrass on a polynomial with unit lead") {
  PadicSeries P = from_ints(5, 8, {3, 1});  // z + 3
  WeierstrassFactorization f = weierstrass_prep(P);
  CHECK(f.poly_part.size() == 2);
  CHECK(f.unit_part.is_constant_at_precision());

  PadicSeries scaled = from_ints(5, 8, {-5, 5});  // 5(z - 1)
  WeierstrassFactorization g = weierstrass_prep(scaled);
  CHECK(g.gauss_valuation == 1);
  CHECK(g.poly_part.back().valuation() == Valuation::finite(1));
}

TEST_CASE("weierstrass suite on the constructed family") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 40; ++trial) {
    long p = (trial % 3 == 0) ? 5 : (trial % 3 == 1 ? 7 : 11);
    int d = 1 + static_cast<int>(rng() % 4);
    PadicSeries P = strassman_family(rng, p, 10, d, 3, nullptr);
    WeierstrassFactorization f = weierstrass_prep(P);
    CHECK(static_cast<int>(f.poly_part.size()) == d + 1);

    std::vector<mpz_class> qc;
    for (const auto& c : f.poly_part) qc.push_back(c.residue());
    PadicSeries Q(p, f.output_precision, std::move(qc), f.output_precision);
    PadicSeries residual = P - Q * f.unit_part;
    for (size_t m = 0; m <= P.truncation_degree(); ++m)
      CHECK(residual.coefficient_valuation(m).clamped(residual.precision()) >=
            std::min<long>(f.output_precision, residual.precision()));
    for (long n = 0; n <= 50; ++n)
      CHECK(f.unit_part.evaluate(PadicInt(p, f.output_precision, n))
                .valuation()
                .is_zero());
  }
}

TEST_CASE("subdivision covers Z_p: every residue root lies in one disk") {
  std::mt19937_64 rng(314159);
  for (int trial = 0; trial < 20; ++trial) {
    long p = 5;
    int d = 1 + static_cast<int>(rng() % 3);
    std::vector<mpz_class> expected;
    PadicSeries P = strassman_family(rng, p, 12, d, 2, &expected);
    RootList roots = zeros_in_Zp(P);

    // brute-force pass over residues mod p^3: classes containing a true root
    // must fall in exactly one reported disk, all others in none
    mpz_class mod3 = 125;
    for (long r = 0; r < 125; ++r) {
      bool has_root = false;
      for (const auto& a : expected) {
        mpz_class red;
        mpz_mod(red.get_mpz_t(), a.get_mpz_t(), mod3.get_mpz_t());
        if (red == r) has_root = true;
      }
      int disks = 0;
      for (const auto& root : roots.roots) {
        // compare at the coarser of the two precisions
        mpz_class m = root.approximation.modulus() < mod3
                          ? root.approximation.modulus()
                          : mod3;
        mpz_class lhs, rhs;
        mpz_mod(lhs.get_mpz_t(), root.approximation.residue().get_mpz_t(),
                m.get_mpz_t());
        mpz_mod(rhs.get_mpz_t(), mpz_class(r).get_mpz_t(), m.get_mpz_t());
        if (lhs == rhs) disks++;
      }
      if (has_root) CHECK(disks >= 1);
      if (disks == 0) CHECK_FALSE(has_root);
    }
  }
}

TEST_CASE("tail floors rise under contracting substitution") {
  PadicSeries H(5, 12, {mpz_class(1), mpz_class(5), mpz_class(50)}, 4);
  PadicSeries child = H.compose_linear(PadicInt(5, 12, 0), PadicInt(5, 12, 5));
  CHECK(child.precision() == 4);         // limited by the tail floor
  CHECK(child.tail_floor() == 4);        // raised, then clamped to precision
}

TEST_CASE("composition and evaluation commute") {
  std::mt19937_64 rng(606060);
  for (int trial = 0; trial < 50; ++trial) {
    long p = (trial % 2) ? 5 : 7;
    std::vector<mpz_class> cs;
    int deg = 1 + static_cast<int>(rng() % 6);
    for (int k = 0; k <= deg; ++k)
      cs.emplace_back(static_cast<long>(rng() % 100000));
    PadicSeries P(p, 14, std::move(cs), 14);
    PadicInt a(p, 14, static_cast<long>(rng() % 1000));
    PadicInt b(p, 14, static_cast<long>(rng() % 1000));
    PadicInt t(p, 14, static_cast<long>(rng() % 1000));
    PadicInt direct = P.evaluate(a + b * t);
    PadicInt via = P.compose_linear(a, b).evaluate(t);
    CHECK(direct == via.with_precision(direct.precision()));
  }
}

TEST_CASE("truncation folds discarded coefficients into the floor") {
  PadicSeries P = from_ints(5, 10, {1, 2, 25, 125});
  PadicSeries t = P.truncated(1);
  CHECK(t.truncation_degree() == 1);
  CHECK(t.tail_floor() == 2);  // the discarded 25 z^2 caps the claim
  CHECK(P.truncated(7).truncation_degree() == 3);  // no-op beyond the degree
}

TEST_CASE("extending a genuine-tail series costs precision") {
  // adding a short Mahler-like series (T = 3) to a longer polynomial means
  // the extended degrees are only known to the short tail's floor
  PadicSeries shorty(5, 12, {mpz_class(1), mpz_class(5)}, 3);
  PadicSeries longer = from_ints(5, 12, {0, 0, 1, 1});
  PadicSeries sum = shorty + longer;
  CHECK(sum.precision() == 3);
  // exact polynomials extend without loss
  PadicSeries exact_short = from_ints(5, 12, {1, 5});
  CHECK((exact_short + longer).precision() == 12);
}

TEST_CASE("products against genuine tails drop to the certified level") {
  PadicSeries mahler(5, 12, {mpz_class(2), mpz_class(5), mpz_class(25)}, 4);
  PadicSeries poly = from_ints(5, 12, {1, 1});
  PadicSeries prod = mahler * poly;
  CHECK(prod.precision() == 4);  // listed-times-tail cross terms at v >= 4
  PadicSeries exact = from_ints(5, 12, {2, 5, 25});
  CHECK((exact * poly).precision() == 12);
}
