#include <doctest.h>

#include <random>

#include "padml/padic.hpp"

using namespace padml;

namespace {

// Independent inverse oracle: extended Euclid on (a, m), written apart from
// the mpz_invert path used by the library.
mpz_class euclid_inverse(const mpz_class& a, const mpz_class& m) {
  mpz_class old_r = a % m, r = m;
  mpz_class old_s = 1, s = 0;
  while (r != 0) {
    mpz_class q = old_r / r;
    mpz_class tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
  }
  mpz_class out = old_s % m;
  if (out < 0) out += m;
  return out;
}

PadicInt random_padic(std::mt19937_64& rng, long p, long N) {
  mpz_class r = 0;
  for (long i = 0; i < N; ++i) {
    r *= p;
    r += static_cast<long>(rng() % static_cast<unsigned long>(p));
  }
  return PadicInt(p, N, r);
}

}  // namespace

TEST_CASE("from_rational embeds p-integral fractions") {
  // 3 * 417 = 1251 = 2*625 + 1
  PadicInt x = PadicInt::from_rational(1, 3, 5, 4);
  CHECK(x.residue() == euclid_inverse(3, mpz_class(625)));
  CHECK(x.residue() == 417);

  CHECK(PadicInt::from_rational(0, 1, 5, 4).residue() == 0);
  CHECK_THROWS_AS(PadicInt::from_rational(1, 5, 5, 4), Error);
  try {
    PadicInt::from_rational(1, 5, 5, 4);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotPIntegral);
  }
  // Reduction happens first: 5/10 = 1/2 is fine at p = 5,
  // including for raw (non-canonical) mpq inputs.
  CHECK(PadicInt::from_rational(5, 10, 5, 2).residue() == 13);
  mpq_class raw(5, 10);
  CHECK(PadicInt::from_rational(raw, 5, 2).residue() == 13);
}

TEST_CASE("arithmetic carries min precision and matches integers") {
  PadicInt a(5, 3, 2), b(5, 3, 3);
  CHECK((a + b).residue() == 5);
  CHECK((PadicInt(5, 3, 5) * PadicInt(5, 3, 25)).residue() == 0);
  CHECK(PadicInt(5, 4, 2).pow(10).residue() == 399);  // 1024 mod 625

  PadicInt lo(5, 2, 7);
  CHECK((a + lo).precision() == 2);

  CHECK_THROWS_AS(PadicInt(5, 3, 1) + PadicInt(7, 3, 1), Error);
  CHECK_THROWS_AS(PadicInt(3, 3, 1), Error);  // primes below 5 rejected
}

TEST_CASE("valuation and inversion") {
  CHECK(PadicInt(5, 4, 50).valuation() == Valuation::finite(2));
  CHECK(PadicInt(5, 4, 0).valuation().infinite);
  CHECK(PadicInt(5, 4, 3).invert().residue() == 417);
  CHECK_THROWS_AS(PadicInt(5, 4, 10).invert(), Error);
}

TEST_CASE("ring laws at carried precision") {
  std::mt19937_64 rng(12345);
  for (int i = 0; i < 200; ++i) {
    long p = (i % 3 == 0) ? 5 : (i % 3 == 1 ? 7 : 11);
    PadicInt a = random_padic(rng, p, 8);
    PadicInt b = random_padic(rng, p, 8);
    PadicInt c = random_padic(rng, p, 8);
    CHECK(((a + b) + c) == (a + (b + c)));
    CHECK((a * (b + c)) == (a * b + a * c));
    Valuation va = a.valuation(), vb = b.valuation();
    if (!va.infinite && !vb.infinite && va.value + vb.value < 8)
      CHECK((a * b).valuation() == Valuation::finite(va.value + vb.value));
    if (a.is_unit()) CHECK((a.invert() * a).residue() == 1);
  }
}

TEST_CASE("from_rational is a homomorphism") {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 100; ++i) {
    long num1 = static_cast<long>(rng() % 2000) - 1000;
    long num2 = static_cast<long>(rng() % 2000) - 1000;
    long den1 = static_cast<long>(rng() % 50) + 1;
    long den2 = static_cast<long>(rng() % 50) + 1;
    if (den1 % 5 == 0 || den2 % 5 == 0) continue;
    mpq_class q1(num1, den1), q2(num2, den2);
    q1.canonicalize();
    q2.canonicalize();
    PadicInt lhs = PadicInt::from_rational(q1, 5, 10) +
                   PadicInt::from_rational(q2, 5, 10);
    mpq_class sum = q1 + q2;
    CHECK(lhs == PadicInt::from_rational(sum, 5, 10));
  }
}

TEST_CASE("log and exp invert each other on their domains") {
  PadicInt u(5, 6, 6);
  PadicInt lg = padic_log(u);
  CHECK(lg.valuation() == Valuation::finite(1));
  PadicInt back = padic_exp(lg);
  CHECK(back.residue() == 6 % back.modulus());

  CHECK(padic_log(PadicInt(5, 6, 1)).is_zero_residue());

  // exp(3 log 6) = 6^3 = 216
  PadicInt three(5, 6, 3);
  PadicInt cube = padic_exp(three * lg);
  CHECK(cube.residue() == PadicInt(5, cube.precision(), 216).residue());

  CHECK_THROWS_AS(padic_log(PadicInt(5, 6, 2)), Error);
  CHECK_THROWS_AS(padic_exp(PadicInt(5, 6, 3)), Error);
}

TEST_CASE("log/exp identities on random domain elements") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 50; ++i) {
    long p = (i % 2 == 0) ? 5 : 7;
    PadicInt x = random_padic(rng, p, 10);
    PadicInt u = PadicInt(p, 10, 1) + PadicInt(p, 10, p) * x;  // 1 + p*x
    PadicInt lg = padic_log(u);
    CHECK(padic_exp(lg) == u.with_precision(padic_exp(lg).precision()));
    PadicInt v = PadicInt(p, 10, p) * x;
    PadicInt ex = padic_exp(v);
    CHECK(padic_log(ex) == v.with_precision(padic_log(ex).precision()));
  }
}
