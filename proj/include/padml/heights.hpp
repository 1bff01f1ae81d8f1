#ifndef PADML_HEIGHTS_HPP
#define PADML_HEIGHTS_HPP

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

#include "padml/dynsys.hpp"

namespace padml {

// Logarithmic Weil height of a point of P^1(Q), kept as the exact reduced
// pair it came from. den = 0 encodes the point at infinity [1:0].
struct HeightValue {
  double value = 0.0;
  mpz_class num;
  mpz_class den;

  static HeightValue of_rational(const mpq_class& q);
  static HeightValue of_projective(const mpz_class& a, const mpz_class& b);
  static HeightValue infinity_point();
};

double log_of_mpz(const mpz_class& n);  // natural log of |n|, n != 0

// Exact count of rationals a/b with b >= 1, gcd(a, b) = 1, max(|a|, b) <= N.
long count_height_le(long N, long cap = 10000);

enum class GapClassification {
  FINITE_IMAGE_SUSPECTED,
  POSITIVE_LIMSUP_WITNESSED,
};

struct GapRecord {
  long n = 0;
  bool defined = true;
  HeightValue height;
  double ratio = 0.0;        // h / log n, only meaningful for n >= 2
  bool has_ratio = false;
  double running_max = 0.0;  // prefix maximum of the ratios so far
};

struct GapReport {
  std::vector<GapRecord> records;
  long n_max = 0;
  double running_max_ratio = 0.0;
  double running_min_ratio_tail = 0.0;  // min ratio over the tail half
  GapClassification classification = GapClassification::POSITIVE_LIMSUP_WITNESSED;
  long last_new_value_index = 0;
  long distinct_values = 0;
};

// Heights of f(Phi^n(x)) for 0 <= n <= n_max with f = numerator/denominator.
// Indices where both vanish are marked undefined and excluded from ratios.
GapReport gap_ratio_series(const PolyMap& map, const RationalPoint& x,
                           const Polynomial& f_num, const Polynomial& f_den,
                           long n_max, const IterationLimits& limits = {});

struct TailSummary {
  double max_tail_ratio = 0.0;
  double min_tail_ratio = 0.0;
  bool divergence_flag = false;  // max ratio over doubling prefixes strictly grows
};

TailSummary limsup_liminf_summary(const GapReport& report,
                                  double tail_fraction = 0.5);

}  // namespace padml

#endif
