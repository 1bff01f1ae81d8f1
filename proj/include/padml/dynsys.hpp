#ifndef PADML_DYNSYS_HPP
#define PADML_DYNSYS_HPP

#include <gmpxx.h>

#include <string>
#include <vector>

#include "padml/errors.hpp"

namespace padml {

// Multivariate polynomial over Q with exact coefficients. Terms are kept in
// graded-lex order with no duplicates and no zero coefficients.
class Polynomial {
public:
  struct Term {
    std::vector<unsigned> exponents;
    mpq_class coefficient;
  };

  Polynomial() = default;
  explicit Polynomial(std::vector<std::string> variables)
      : variables_(std::move(variables)) {}

  // Grammar: integers, rationals a/b, variables, + - * ^, parentheses.
  // No implicit multiplication. Throws SyntaxError with a character
  // position, or UnknownVariable.
  static Polynomial parse(const std::string& text,
                          const std::vector<std::string>& variables);

  static Polynomial constant(const mpq_class& c,
                             const std::vector<std::string>& variables);
  static Polynomial variable(size_t index,
                             const std::vector<std::string>& variables);

  const std::vector<std::string>& variables() const { return variables_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  mpq_class constant_value() const;  // 0 for the zero polynomial
  unsigned total_degree() const;

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial negate() const;
  bool operator==(const Polynomial& o) const;

  Polynomial derivative(size_t variable_index) const;

  mpq_class evaluate(const std::vector<mpq_class>& point) const;
  // Requires p-integral coefficients and point entries in [0, p).
  long evaluate_mod(const std::vector<long>& point, long p) const;

  bool is_p_integral(long p) const;

  std::string to_string() const;

  void add_term(const std::vector<unsigned>& exponents, const mpq_class& c);

private:
  std::vector<std::string> variables_;
  std::vector<Term> terms_;

  void normalize();
};

// An m-tuple of polynomials in m variables defining an endomorphism of A^m.
struct PolyMap {
  std::vector<Polynomial> components;

  size_t dimension() const { return components.size(); }
  const std::vector<std::string>& variables() const {
    return components.at(0).variables();
  }
};

PolyMap parse_map(const std::vector<std::string>& texts,
                  const std::vector<std::string>& variables);

using RationalPoint = std::vector<mpq_class>;
using ResiduePoint = std::vector<long>;

struct ResiduePeriod {
  long preperiod = 0;  // minimal l with Phi^(l+D)(xbar) = Phi^l(xbar)
  long period = 1;     // minimal D for that l
};

struct IterationLimits {
  // Bits allowed per coordinate numerator/denominator; factorial-type
  // growth must fail loudly instead of stalling.
  size_t max_bits = size_t(1) << 20;
};

RationalPoint apply_map(const PolyMap& map, const RationalPoint& x,
                        const IterationLimits& limits = {});
RationalPoint iterate(const PolyMap& map, const RationalPoint& x, long n,
                      const IterationLimits& limits = {});
std::vector<RationalPoint> orbit(const PolyMap& map, const RationalPoint& x,
                                 long n_max, const IterationLimits& limits = {});

bool good_reduction_check(const PolyMap& map, const RationalPoint& x, long p);

ResiduePoint reduce_point_mod_p(const RationalPoint& x, long p);
ResiduePoint apply_map_mod_p(const PolyMap& map, const ResiduePoint& x, long p);

// Floyd-style detection on the finite set F_p^m; the step count is capped by
// p^m + 1 which is guaranteed to close the cycle.
ResiduePeriod residue_period(const PolyMap& map, const RationalPoint& x, long p);

// Sufficient etaleness certificate on affine space: det(Jacobian) is a
// nonzero constant.
bool jacobian_unit_check(const PolyMap& map);
Polynomial jacobian_determinant(const PolyMap& map);

}  // namespace padml

#endif
