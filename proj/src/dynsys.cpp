#include "padml/dynsys.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "padml/padic.hpp"

namespace padml {

namespace {

// Graded lex, higher degree first.
bool term_order(const Polynomial::Term& a, const Polynomial::Term& b) {
  unsigned da = 0, db = 0;
  for (unsigned e : a.exponents) da += e;
  for (unsigned e : b.exponents) db += e;
  if (da != db) return da > db;
  return a.exponents > b.exponents;
}

}  // namespace

void Polynomial::normalize() {
  for (auto& t : terms_) t.coefficient.canonicalize();
  std::sort(terms_.begin(), terms_.end(), term_order);
  std::vector<Term> merged;
  for (auto& t : terms_) {
    if (!merged.empty() && merged.back().exponents == t.exponents)
      merged.back().coefficient += t.coefficient;
    else
      merged.push_back(std::move(t));
  }
  merged.erase(std::remove_if(merged.begin(), merged.end(),
                              [](const Term& t) { return t.coefficient == 0; }),
               merged.end());
  terms_ = std::move(merged);
}

void Polynomial::add_term(const std::vector<unsigned>& exponents,
                          const mpq_class& c) {
  if (exponents.size() != variables_.size())
    raise(ErrorCode::DimensionMismatch, "exponent tuple length");
  terms_.push_back(Term{exponents, c});
  normalize();
}

Polynomial Polynomial::constant(const mpq_class& c,
                                const std::vector<std::string>& variables) {
  Polynomial out(variables);
  if (c != 0)
    out.terms_.push_back(Term{std::vector<unsigned>(variables.size(), 0), c});
  out.normalize();
  return out;
}

Polynomial Polynomial::variable(size_t index,
                                const std::vector<std::string>& variables) {
  Polynomial out(variables);
  std::vector<unsigned> e(variables.size(), 0);
  e.at(index) = 1;
  out.terms_.push_back(Term{std::move(e), mpq_class(1)});
  return out;
}

bool Polynomial::is_constant() const {
  for (const auto& t : terms_)
    for (unsigned e : t.exponents)
      if (e != 0) return false;
  return true;
}

mpq_class Polynomial::constant_value() const {
  for (const auto& t : terms_) {
    bool all_zero = true;
    for (unsigned e : t.exponents)
      if (e != 0) all_zero = false;
    if (all_zero) return t.coefficient;
  }
  return mpq_class(0);
}

unsigned Polynomial::total_degree() const {
  unsigned d = 0;
  for (const auto& t : terms_) {
    unsigned s = 0;
    for (unsigned e : t.exponents) s += e;
    d = std::max(d, s);
  }
  return d;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  Polynomial out(variables_);
  out.terms_ = terms_;
  out.terms_.insert(out.terms_.end(), o.terms_.begin(), o.terms_.end());
  out.normalize();
  return out;
}

Polynomial Polynomial::negate() const {
  Polynomial out(variables_);
  out.terms_ = terms_;
  for (auto& t : out.terms_) t.coefficient = -t.coefficient;
  return out;
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
  return *this + o.negate();
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
  Polynomial out(variables_);
  for (const auto& a : terms_) {
    for (const auto& b : o.terms_) {
      Term t;
      t.coefficient = a.coefficient * b.coefficient;
      t.exponents.resize(variables_.size());
      for (size_t i = 0; i < variables_.size(); ++i)
        t.exponents[i] = a.exponents[i] + b.exponents[i];
      out.terms_.push_back(std::move(t));
    }
  }
  out.normalize();
  return out;
}

bool Polynomial::operator==(const Polynomial& o) const {
  if (terms_.size() != o.terms_.size()) return false;
  for (size_t i = 0; i < terms_.size(); ++i)
    if (terms_[i].exponents != o.terms_[i].exponents ||
        terms_[i].coefficient != o.terms_[i].coefficient)
      return false;
  return true;
}

Polynomial Polynomial::derivative(size_t variable_index) const {
  Polynomial out(variables_);
  for (const auto& t : terms_) {
    unsigned e = t.exponents.at(variable_index);
    if (e == 0) continue;
    Term d;
    d.coefficient = t.coefficient * static_cast<long>(e);
    d.exponents = t.exponents;
    d.exponents[variable_index] = e - 1;
    out.terms_.push_back(std::move(d));
  }
  out.normalize();
  return out;
}

mpq_class Polynomial::evaluate(const std::vector<mpq_class>& point) const {
  if (point.size() != variables_.size())
    raise(ErrorCode::DimensionMismatch, "point dimension");
  mpq_class acc = 0;
  for (const auto& t : terms_) {
    mpq_class m = t.coefficient;
    for (size_t i = 0; i < point.size(); ++i) {
      for (unsigned e = 0; e < t.exponents[i]; ++e) m *= point[i];
    }
    acc += m;
  }
  return acc;
}

long Polynomial::evaluate_mod(const std::vector<long>& point, long p) const {
  if (point.size() != variables_.size())
    raise(ErrorCode::DimensionMismatch, "point dimension");
  mpz_class acc = 0;
  const mpz_class pz(p);
  for (const auto& t : terms_) {
    const mpz_class& den = t.coefficient.get_den();
    mpz_class dinv;
    if (!mpz_invert(dinv.get_mpz_t(), den.get_mpz_t(), pz.get_mpz_t()))
      raise(ErrorCode::NotPIntegral, "coefficient with p in denominator");
    mpz_class m = t.coefficient.get_num() * dinv;
    for (size_t i = 0; i < point.size(); ++i)
      for (unsigned e = 0; e < t.exponents[i]; ++e) m *= point[i];
    acc += m;
  }
  mpz_class r;
  mpz_mod(r.get_mpz_t(), acc.get_mpz_t(), pz.get_mpz_t());
  return static_cast<long>(r.get_ui());
}

bool Polynomial::is_p_integral(long p) const {
  for (const auto& t : terms_)
    if (mpz_divisible_ui_p(t.coefficient.get_den().get_mpz_t(),
                           static_cast<unsigned long>(p)))
      return false;
  return true;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : terms_) {
    mpq_class c = t.coefficient;
    if (first) {
      if (c < 0) {
        os << "-";
        c = -c;
      }
    } else {
      os << (c < 0 ? " - " : " + ");
      if (c < 0) c = -c;
    }
    bool has_var = false;
    for (unsigned e : t.exponents)
      if (e > 0) has_var = true;
    if (c != 1 || !has_var) {
      os << c.get_str();
      if (has_var) os << "*";
    }
    bool first_var = true;
    for (size_t i = 0; i < t.exponents.size(); ++i) {
      if (t.exponents[i] == 0) continue;
      if (!first_var) os << "*";
      os << variables_[i];
      if (t.exponents[i] > 1) os << "^" << t.exponents[i];
      first_var = false;
    }
    first = false;
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Parser: expr := term (('+'|'-') term)*, term := factor ('*' factor)*,
// factor := base ('^' uint)?, base := number | variable | '(' expr ')' |
// ('-'|'+') base. Rational literals are INT '/' INT.
// ---------------------------------------------------------------------------

namespace {

struct Parser {
  const std::string& text;
  const std::vector<std::string>& vars;
  size_t pos = 0;

  [[noreturn]] void fail(const std::string& what) const {
    raise(ErrorCode::SyntaxError,
          what + " at position " + std::to_string(pos));
  }

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
      pos++;
  }

  bool eat(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      pos++;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }

  mpz_class parse_uint() {
    skip_ws();
    size_t start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
      pos++;
    if (pos == start) fail("expected integer");
    return mpz_class(text.substr(start, pos - start));
  }

  Polynomial parse_base() {
    skip_ws();
    if (pos >= text.size()) fail("unexpected end of input");
    char c = text[pos];
    if (c == '(') {
      pos++;
      Polynomial inner = parse_expr();
      if (!eat(')')) fail("expected ')'");
      return inner;
    }
    if (c == '-' || c == '+') {
      pos++;
      Polynomial inner = parse_base();
      return c == '-' ? inner.negate() : inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      mpz_class num = parse_uint();
      skip_ws();
      if (pos < text.size() && text[pos] == '/') {
        pos++;
        mpz_class den = parse_uint();
        if (den == 0) fail("zero denominator");
        mpq_class q(num, den);
        q.canonicalize();
        return Polynomial::constant(q, vars);
      }
      return Polynomial::constant(mpq_class(num), vars);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos;
      while (pos < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
        pos++;
      std::string name = text.substr(start, pos - start);
      for (size_t i = 0; i < vars.size(); ++i)
        if (vars[i] == name) return Polynomial::variable(i, vars);
      raise(ErrorCode::UnknownVariable,
            "'" + name + "' at position " + std::to_string(start));
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  Polynomial parse_factor() {
    Polynomial base = parse_base();
    if (eat('^')) {
      mpz_class e = parse_uint();
      if (e > 64) fail("exponent too large");
      unsigned long k = e.get_ui();
      Polynomial acc = Polynomial::constant(1, vars);
      for (unsigned long i = 0; i < k; ++i) acc = acc * base;
      return acc;
    }
    return base;
  }

  Polynomial parse_term() {
    Polynomial acc = parse_factor();
    while (eat('*')) acc = acc * parse_factor();
    return acc;
  }

  Polynomial parse_expr() {
    Polynomial acc = parse_term();
    while (true) {
      char c = peek();
      if (c == '+') {
        pos++;
        acc = acc + parse_term();
      } else if (c == '-') {
        pos++;
        acc = acc - parse_term();
      } else {
        break;
      }
    }
    return acc;
  }
};

}  // namespace

Polynomial Polynomial::parse(const std::string& text,
                             const std::vector<std::string>& variables) {
  Parser parser{text, variables};
  Polynomial out = parser.parse_expr();
  parser.skip_ws();
  if (parser.pos != text.size()) parser.fail("trailing input");
  return out;
}

PolyMap parse_map(const std::vector<std::string>& texts,
                  const std::vector<std::string>& variables) {
  if (texts.size() != variables.size())
    raise(ErrorCode::DimensionMismatch,
          "map needs one component per variable (" +
              std::to_string(variables.size()) + " expected, " +
              std::to_string(texts.size()) + " given)");
  PolyMap map;
  for (const auto& t : texts) map.components.push_back(Polynomial::parse(t, variables));
  return map;
}

// ---------------------------------------------------------------------------
// Iteration.
// ---------------------------------------------------------------------------

namespace {

void check_budget(const RationalPoint& x, const IterationLimits& limits) {
  for (const auto& q : x) {
    if (mpz_sizeinbase(q.get_num().get_mpz_t(), 2) > limits.max_bits ||
        mpz_sizeinbase(q.get_den().get_mpz_t(), 2) > limits.max_bits)
      raise(ErrorCode::ResourceLimit, "coordinate exceeded bit budget");
  }
}

}  // namespace

RationalPoint apply_map(const PolyMap& map, const RationalPoint& x,
                        const IterationLimits& limits) {
  if (x.size() != map.dimension())
    raise(ErrorCode::DimensionMismatch, "point vs map dimension");
  RationalPoint out;
  out.reserve(map.dimension());
  for (const auto& f : map.components) out.push_back(f.evaluate(x));
  check_budget(out, limits);
  return out;
}

RationalPoint iterate(const PolyMap& map, const RationalPoint& x, long n,
                      const IterationLimits& limits) {
  if (n < 0) raise(ErrorCode::InvalidArgument, "negative iterate");
  RationalPoint cur = x;
  for (long i = 0; i < n; ++i) cur = apply_map(map, cur, limits);
  return cur;
}

std::vector<RationalPoint> orbit(const PolyMap& map, const RationalPoint& x,
                                 long n_max, const IterationLimits& limits) {
  std::vector<RationalPoint> out;
  out.reserve(static_cast<size_t>(n_max) + 1);
  out.push_back(x);
  for (long i = 0; i < n_max; ++i) out.push_back(apply_map(map, out.back(), limits));
  return out;
}

bool good_reduction_check(const PolyMap& map, const RationalPoint& x, long p) {
  for (const auto& f : map.components)
    if (!f.is_p_integral(p)) return false;
  for (const auto& q : x)
    if (mpz_divisible_ui_p(q.get_den().get_mpz_t(), static_cast<unsigned long>(p)))
      return false;
  return true;
}

ResiduePoint reduce_point_mod_p(const RationalPoint& x, long p) {
  ResiduePoint out;
  out.reserve(x.size());
  const mpz_class pz(p);
  for (const auto& q : x) {
    mpz_class dinv;
    if (!mpz_invert(dinv.get_mpz_t(), q.get_den().get_mpz_t(), pz.get_mpz_t()))
      raise(ErrorCode::NotPIntegral, "coordinate with p in denominator");
    mpz_class r = q.get_num() * dinv;
    mpz_mod(r.get_mpz_t(), r.get_mpz_t(), pz.get_mpz_t());
    out.push_back(static_cast<long>(r.get_ui()));
  }
  return out;
}

ResiduePoint apply_map_mod_p(const PolyMap& map, const ResiduePoint& x, long p) {
  ResiduePoint out;
  out.reserve(map.dimension());
  for (const auto& f : map.components) out.push_back(f.evaluate_mod(x, p));
  return out;
}

ResiduePeriod residue_period(const PolyMap& map, const RationalPoint& x, long p) {
  if (!good_reduction_check(map, x, p))
    raise(ErrorCode::NotPIntegral, "residue period needs good reduction");
  double cap_d = 1;
  for (size_t i = 0; i < map.dimension(); ++i) cap_d *= static_cast<double>(p);
  if (cap_d > 2e7)
    raise(ErrorCode::ResourceLimit, "residue space too large for cycle detection");
  long cap = static_cast<long>(cap_d) + 1;

  std::map<ResiduePoint, long> seen;
  ResiduePoint cur = reduce_point_mod_p(x, p);
  for (long step = 0; step <= cap; ++step) {
    auto it = seen.find(cur);
    if (it != seen.end())
      return ResiduePeriod{it->second, step - it->second};
    seen.emplace(cur, step);
    cur = apply_map_mod_p(map, cur, p);
  }
  raise(ErrorCode::ResourceLimit, "cycle detection exceeded p^m + 1 steps");
}

Polynomial jacobian_determinant(const PolyMap& map) {
  const size_t m = map.dimension();
  std::vector<std::vector<Polynomial>> J(m, std::vector<Polynomial>(m));
  for (size_t i = 0; i < m; ++i)
    for (size_t j = 0; j < m; ++j) J[i][j] = map.components[i].derivative(j);

  // Laplace expansion; fine for the small dimensions handled here.
  std::vector<size_t> cols(m);
  for (size_t j = 0; j < m; ++j) cols[j] = j;

  struct Rec {
    const std::vector<std::vector<Polynomial>>& J;
    const std::vector<std::string>& vars;
    Polynomial det(size_t row, std::vector<size_t> cols) {
      if (cols.size() == 1) return J[row][cols[0]];
      Polynomial acc = Polynomial::constant(0, vars);
      for (size_t k = 0; k < cols.size(); ++k) {
        std::vector<size_t> rest;
        for (size_t j = 0; j < cols.size(); ++j)
          if (j != k) rest.push_back(cols[j]);
        Polynomial minor = det(row + 1, rest);
        Polynomial piece = J[row][cols[k]] * minor;
        acc = (k % 2 == 0) ? acc + piece : acc - piece;
      }
      return acc;
    }
  } rec{J, map.variables()};
  return rec.det(0, cols);
}

bool jacobian_unit_check(const PolyMap& map) {
  Polynomial det = jacobian_determinant(map);
  return det.is_constant() && !det.is_zero();
}

}  // namespace padml
