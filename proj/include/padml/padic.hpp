#ifndef PADML_PADIC_HPP
#define PADML_PADIC_HPP

#include <gmpxx.h>

#include <string>

#include "padml/errors.hpp"

namespace padml {

// p-adic valuation of a residue class; INFINITE means the value is
// indistinguishable from 0 at the precision it was computed at.
struct Valuation {
  long value = 0;
  bool infinite = false;

  static Valuation finite(long v) { return Valuation{v, false}; }
  static Valuation inf() { return Valuation{0, true}; }

  bool is_zero() const { return !infinite && value == 0; }
  bool operator==(const Valuation& o) const {
    return infinite == o.infinite && (infinite || value == o.value);
  }
  // INFINITE compares greater than every finite valuation.
  bool operator<(const Valuation& o) const {
    if (infinite) return false;
    if (o.infinite) return true;
    return value < o.value;
  }
  long clamped(long cap) const { return infinite ? cap : value; }
  std::string to_string() const { return infinite ? "inf" : std::to_string(value); }
};

// Element of Z_p known to absolute precision p^N: a residue in [0, p^N).
// Primes below 5 are rejected so that exp/log convergence bounds hold
// uniformly everywhere in the toolkit.
class PadicInt {
public:
  PadicInt(long prime, long precision, mpz_class residue);

  static PadicInt zero(long prime, long precision) {
    return PadicInt(prime, precision, 0);
  }
  // Embeds a p-integral rational: the unique residue r with den*r = num mod p^N.
  static PadicInt from_rational(const mpz_class& num, const mpz_class& den,
                                long prime, long precision);
  static PadicInt from_rational(const mpq_class& q, long prime, long precision);

  long prime() const { return prime_; }
  long precision() const { return precision_; }
  const mpz_class& residue() const { return residue_; }
  const mpz_class& modulus() const { return modulus_; }

  bool is_zero_residue() const { return residue_ == 0; }

  // Largest k with p^k | residue, INFINITE for residue 0.
  Valuation valuation() const;
  bool is_unit() const { return residue_ % prime_ != 0; }

  PadicInt with_precision(long new_precision) const;

  PadicInt operator+(const PadicInt& o) const;
  PadicInt operator-(const PadicInt& o) const;
  PadicInt operator*(const PadicInt& o) const;
  PadicInt operator-() const;
  bool operator==(const PadicInt& o) const;

  PadicInt pow(unsigned long k) const;
  PadicInt invert() const;  // requires valuation 0

  // Exact division by p^k; requires every admissible lift divisible by p^k,
  // i.e. valuation >= k or residue 0. Precision drops by k.
  PadicInt divide_p_power(long k) const;

  std::string to_string() const;

private:
  long prime_;
  long precision_;
  mpz_class residue_;
  mpz_class modulus_;
};

// Cached p^N.
const mpz_class& padic_modulus(long prime, long precision);

void check_same_prime(const PadicInt& a, const PadicInt& b);

// Iwasawa log on 1 + pZ_p. Output precision equals the input precision:
// for p >= 5 the term-by-term loss v_p(k) is dominated by the gain k*v_p(u-1).
PadicInt padic_log(const PadicInt& u);

// Exponential on pZ_p; same precision argument via v_p(k!) = (k - digitsum)/(p-1).
PadicInt padic_exp(const PadicInt& v);

long valuation_of_factorial(unsigned long k, long p);
long valuation_of_mpz(const mpz_class& n, long p);  // -1 for n = 0
long valuation_of_mpq(const mpq_class& q, long p);  // num - den valuation; q != 0

}  // namespace padml

#endif
