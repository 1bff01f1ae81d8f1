#ifndef PADML_SERIES_HPP
#define PADML_SERIES_HPP

#include <optional>
#include <utility>
#include <vector>

#include "padml/padic.hpp"

namespace padml {

// Truncated element of Z_p<z>: listed coefficients (index = degree), all at a
// common absolute precision, plus a certified tail valuation floor T: every
// omitted coefficient a_m (m beyond the truncation degree) has v_p(a_m) >= T.
// A polynomial carries T = precision, the strongest claim expressible when
// residues are only known mod p^N.
class PadicSeries {
public:
  PadicSeries(long prime, long precision, std::vector<mpz_class> coefficients,
              long tail_floor);

  static PadicSeries from_rationals(long prime, long precision,
                                    const std::vector<mpq_class>& coeffs);
  static PadicSeries constant(const PadicInt& c);
  static PadicSeries monomial(long prime, long precision, size_t degree,
                              const mpz_class& c = 1);

  long prime() const { return prime_; }
  long precision() const { return precision_; }
  long tail_floor() const { return tail_floor_; }
  size_t truncation_degree() const { return coeffs_.size() - 1; }
  size_t coefficient_count() const { return coeffs_.size(); }

  PadicInt coefficient(size_t m) const;
  const mpz_class& raw_coefficient(size_t m) const { return coeffs_[m]; }
  Valuation coefficient_valuation(size_t m) const;

  // True when every listed coefficient has residue 0 at this precision.
  bool is_zero_at_precision() const;
  // True when every coefficient of index >= 1 has residue 0.
  bool is_constant_at_precision() const;

  PadicSeries operator+(const PadicSeries& o) const;
  PadicSeries operator-(const PadicSeries& o) const;
  PadicSeries operator*(const PadicSeries& o) const;
  PadicSeries scale(const PadicInt& c) const;
  PadicSeries shift_constant(const PadicInt& c) const;  // P + c
  PadicSeries derivative() const;

  // Divides every coefficient (and the tail floor) by p^k. Requires the
  // Gauss valuation and tail floor to both certify divisibility.
  PadicSeries divide_p_power(long k) const;

  PadicSeries truncated(size_t max_degree) const;
  PadicSeries with_tail_floor(long t) const;

  // Evaluation at z in Z_p. The result precision is min(precision, T) since
  // the omitted tail contributes error at valuation >= T.
  PadicInt evaluate(const PadicInt& z) const;

  // z |-> a + b z with a, b in Z_p. Substituting b with v_p(b) >= 1 raises
  // the floor by v_p(b) per omitted degree, which is what makes residue
  // subdivision terminate.
  PadicSeries compose_linear(const PadicInt& a, const PadicInt& b) const;

  std::string to_string() const;

private:
  long prime_;
  long precision_;
  long tail_floor_;
  std::vector<mpz_class> coeffs_;

  void canonicalize();
};

struct WeierstrassFactorization {
  std::vector<PadicInt> poly_part;  // degree D(P), leading coefficient p^g * unit
  PadicSeries unit_part;            // Gauss valuation 0, unit constant term
  long gauss_valuation = 0;
  // Residual P - poly*unit is certified 0 to this absolute precision on the
  // listed range.
  long output_precision = 0;
};

struct RootRecord {
  PadicInt approximation;
  bool certified_simple;  // Newton/Hensel certificate held
};

struct RootList {
  std::vector<RootRecord> roots;
  long strassman_bound = 0;
};

// Min over listed coefficients of v_p(a_m), valid only when that min is
// below the tail floor so truncation cannot change the answer.
Valuation gauss_valuation(const PadicSeries& P);

// D(P): the largest index attaining the Gauss valuation.
long strassman_degree(const PadicSeries& P);

// Largest index m >= 1 attaining min_{j>=1} v_p(a_j). This bounds the zero
// count of P - t for every t in Z_p, including the case where the constant
// coefficient strictly dominates (where 1 + D(P) alone would not).
long shifted_strassman_index(const PadicSeries& P);

// Zero-count bound for P - shift: D(P - shift) when directly computable,
// otherwise the shift-independent fallback.
long strassman_zero_bound(const PadicSeries& P, const PadicInt& shift);

WeierstrassFactorization weierstrass_prep(const PadicSeries& P);

struct RootIsolationOptions {
  int max_depth = 32;
  long min_precision = 2;
};

// Isolates all roots in Z_p by residue subdivision plus Newton refinement on
// unit-derivative residues. Throws PrecisionExhausted naming the unresolved
// residue class when a branch cannot be decided at the working precision.
RootList zeros_in_Zp(const PadicSeries& P, const RootIsolationOptions& opts = {});

}  // namespace padml

#endif
