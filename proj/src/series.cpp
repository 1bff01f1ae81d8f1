#include "padml/series.hpp"

#include <algorithm>
#include <sstream>

namespace padml {

namespace {

constexpr size_t kMaxKeptDegree = 512;

// Certified lower bound on the valuation of every listed coefficient:
// residues equal to 0 are known to valuation >= precision.
long listed_valuation_floor(const PadicSeries& P) {
  long best = P.precision();
  for (size_t m = 0; m < P.coefficient_count(); ++m) {
    Valuation v = P.coefficient_valuation(m);
    if (!v.infinite) best = std::min(best, v.value);
  }
  return best;
}

}  // namespace

PadicSeries::PadicSeries(long prime, long precision,
                         std::vector<mpz_class> coefficients, long tail_floor)
    : prime_(prime),
      precision_(precision),
      tail_floor_(tail_floor),
      coeffs_(std::move(coefficients)) {
  if (prime_ < 5) raise(ErrorCode::InvalidArgument, "prime must be >= 5");
  if (precision_ < 1) raise(ErrorCode::InvalidArgument, "precision must be >= 1");
  canonicalize();
}

void PadicSeries::canonicalize() {
  if (coeffs_.empty()) coeffs_.emplace_back(0);
  const mpz_class& mod = padic_modulus(prime_, precision_);
  for (auto& c : coeffs_)
    mpz_mod(c.get_mpz_t(), c.get_mpz_t(), mod.get_mpz_t());
  if (tail_floor_ < 1)
    raise(ErrorCode::PrecisionExhausted, "tail valuation floor collapsed below 1");
  tail_floor_ = std::min(tail_floor_, precision_);
}

PadicSeries PadicSeries::from_rationals(long prime, long precision,
                                        const std::vector<mpq_class>& coeffs) {
  std::vector<mpz_class> out;
  out.reserve(coeffs.size());
  for (const auto& q : coeffs)
    out.push_back(PadicInt::from_rational(q, prime, precision).residue());
  return PadicSeries(prime, precision, std::move(out), precision);
}

PadicSeries PadicSeries::constant(const PadicInt& c) {
  return PadicSeries(c.prime(), c.precision(), {c.residue()}, c.precision());
}

PadicSeries PadicSeries::monomial(long prime, long precision, size_t degree,
                                  const mpz_class& c) {
  std::vector<mpz_class> v(degree + 1, mpz_class(0));
  v[degree] = c;
  return PadicSeries(prime, precision, std::move(v), precision);
}

PadicInt PadicSeries::coefficient(size_t m) const {
  if (m >= coeffs_.size())
    raise(ErrorCode::InvalidArgument, "coefficient index beyond truncation");
  return PadicInt(prime_, precision_, coeffs_[m]);
}

Valuation PadicSeries::coefficient_valuation(size_t m) const {
  if (coeffs_[m] == 0) return Valuation::inf();
  return Valuation::finite(valuation_of_mpz(coeffs_[m], prime_));
}

bool PadicSeries::is_zero_at_precision() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(),
                     [](const mpz_class& c) { return c == 0; });
}

bool PadicSeries::is_constant_at_precision() const {
  for (size_t m = 1; m < coeffs_.size(); ++m)
    if (coeffs_[m] != 0) return false;
  return true;
}

PadicSeries PadicSeries::operator+(const PadicSeries& o) const {
  if (prime_ != o.prime_) raise(ErrorCode::PrimeMismatch, "series prime mismatch");
  long n = std::min(precision_, o.precision_);
  size_t len = std::max(coeffs_.size(), o.coeffs_.size());
  // A shorter operand's degrees between the two truncations are its tail:
  // the extended coefficients are only known to that operand's floor.
  if (coeffs_.size() < len) n = std::min(n, tail_floor_);
  if (o.coeffs_.size() < len) n = std::min(n, o.tail_floor_);
  std::vector<mpz_class> out(len, mpz_class(0));
  for (size_t m = 0; m < coeffs_.size(); ++m) out[m] += coeffs_[m];
  for (size_t m = 0; m < o.coeffs_.size(); ++m) out[m] += o.coeffs_[m];
  long t = std::min(tail_floor_, o.tail_floor_);
  return PadicSeries(prime_, n, std::move(out), std::min<long>(t, n));
}

PadicSeries PadicSeries::operator-(const PadicSeries& o) const {
  return *this + o.scale(PadicInt(prime_, o.precision_, -1));
}

PadicSeries PadicSeries::operator*(const PadicSeries& o) const {
  if (prime_ != o.prime_) raise(ErrorCode::PrimeMismatch, "series prime mismatch");
  long n = std::min(precision_, o.precision_);
  long la = listed_valuation_floor(*this);
  long lb = listed_valuation_floor(o);
  // Kept coefficients also receive listed-times-tail cross terms.
  n = std::min({n, tail_floor_ + lb, o.tail_floor_ + la});
  const mpz_class& mod = padic_modulus(prime_, n);

  size_t full_degree = truncation_degree() + o.truncation_degree();
  size_t kept = std::min(full_degree, kMaxKeptDegree);
  std::vector<mpz_class> out(full_degree + 1, mpz_class(0));
  for (size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i] == 0) continue;
    for (size_t j = 0; j < o.coeffs_.size(); ++j) {
      if (o.coeffs_[j] == 0) continue;
      out[i + j] += coeffs_[i] * o.coeffs_[j];
    }
  }
  for (auto& c : out) mpz_mod(c.get_mpz_t(), c.get_mpz_t(), mod.get_mpz_t());

  long t = std::min({tail_floor_ + lb, o.tail_floor_ + la,
                     tail_floor_ + o.tail_floor_});
  for (size_t m = kept + 1; m <= full_degree; ++m) {
    if (out[m] == 0) continue;
    t = std::min(t, valuation_of_mpz(out[m], prime_));
  }
  out.resize(kept + 1);
  return PadicSeries(prime_, n, std::move(out), std::min<long>(t, n));
}

PadicSeries PadicSeries::scale(const PadicInt& c) const {
  long n = std::min(precision_, c.precision());
  std::vector<mpz_class> out = coeffs_;
  for (auto& x : out) x *= c.residue();
  long vc = c.valuation().clamped(n);
  return PadicSeries(prime_, n, std::move(out),
                     std::min<long>(tail_floor_ + vc, n));
}

PadicSeries PadicSeries::shift_constant(const PadicInt& c) const {
  check_same_prime(coefficient(0), c);
  long n = std::min(precision_, c.precision());
  std::vector<mpz_class> out = coeffs_;
  out[0] += c.residue();
  return PadicSeries(prime_, n, std::move(out), std::min<long>(tail_floor_, n));
}

PadicSeries PadicSeries::derivative() const {
  std::vector<mpz_class> out;
  if (coeffs_.size() > 1) {
    out.reserve(coeffs_.size() - 1);
    for (size_t m = 1; m < coeffs_.size(); ++m)
      out.push_back(coeffs_[m] * static_cast<unsigned long>(m));
  }
  return PadicSeries(prime_, precision_, std::move(out), tail_floor_);
}

PadicSeries PadicSeries::divide_p_power(long k) const {
  if (k == 0) return *this;
  if (k < 0) raise(ErrorCode::InvalidArgument, "negative power");
  if (precision_ - k < 1)
    raise(ErrorCode::PrecisionExhausted,
          "series precision exhausted dividing by p^" + std::to_string(k));
  if (tail_floor_ - k < 1)
    raise(ErrorCode::TailAmbiguous,
          "tail floor " + std::to_string(tail_floor_) +
              " cannot certify division by p^" + std::to_string(k));
  const mpz_class& pk = padic_modulus(prime_, k);
  std::vector<mpz_class> out;
  out.reserve(coeffs_.size());
  for (const auto& c : coeffs_) {
    if (!mpz_divisible_p(c.get_mpz_t(), pk.get_mpz_t()))
      raise(ErrorCode::InvalidArgument,
            "coefficient valuation below p^" + std::to_string(k));
    out.push_back(c / pk);
  }
  return PadicSeries(prime_, precision_ - k, std::move(out), tail_floor_ - k);
}

PadicSeries PadicSeries::truncated(size_t max_degree) const {
  if (max_degree >= truncation_degree()) return *this;
  std::vector<mpz_class> out(coeffs_.begin(),
                             coeffs_.begin() + static_cast<long>(max_degree) + 1);
  long t = tail_floor_;
  for (size_t m = max_degree + 1; m < coeffs_.size(); ++m) {
    if (coeffs_[m] == 0) continue;
    t = std::min(t, valuation_of_mpz(coeffs_[m], prime_));
  }
  return PadicSeries(prime_, precision_, std::move(out), t);
}

PadicSeries PadicSeries::with_tail_floor(long t) const {
  return PadicSeries(prime_, precision_, coeffs_, t);
}

PadicInt PadicSeries::evaluate(const PadicInt& z) const {
  check_same_prime(coefficient(0), z);
  long n = std::min(tail_floor_, z.precision());
  PadicInt zz(prime_, n, z.residue());
  PadicInt acc = PadicInt::zero(prime_, n);
  for (size_t m = coeffs_.size(); m-- > 0;) {
    acc = acc * zz + PadicInt(prime_, n, coeffs_[m]);
  }
  return acc;
}

PadicSeries PadicSeries::compose_linear(const PadicInt& a, const PadicInt& b) const {
  check_same_prime(coefficient(0), a);
  check_same_prime(coefficient(0), b);
  long n = std::min({precision_, a.precision(), b.precision()});
  // Coefficients of P(a+bz) pick up tail error >= T at every degree, so the
  // composed precision drops to min(N, T).
  long nc = std::min(n, tail_floor_);
  const mpz_class& mod = padic_modulus(prime_, nc);
  const size_t M = truncation_degree();

  std::vector<mpz_class> acc(1, mpz_class(0));
  for (size_t m = coeffs_.size(); m-- > 0;) {
    // acc := acc*(a + b z) + c_m
    std::vector<mpz_class> next(std::min(acc.size() + 1, M + 1), mpz_class(0));
    for (size_t j = 0; j < acc.size(); ++j) {
      if (acc[j] == 0) continue;
      next[j] += acc[j] * a.residue();
      if (j + 1 < next.size()) next[j + 1] += acc[j] * b.residue();
    }
    next[0] += coeffs_[m];
    for (auto& c : next) mpz_mod(c.get_mpz_t(), c.get_mpz_t(), mod.get_mpz_t());
    acc = std::move(next);
  }
  long vb = b.valuation().clamped(n);
  long t = tail_floor_ + static_cast<long>(M + 1) * vb;
  if (tail_floor_ == precision_) t = nc;  // exact-tail input stays exact
  return PadicSeries(prime_, nc, std::move(acc), std::min<long>(t, nc));
}

std::string PadicSeries::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (size_t m = 0; m < coeffs_.size(); ++m) {
    if (coeffs_[m] == 0) continue;
    if (!first) os << " + ";
    os << coeffs_[m].get_str();
    if (m >= 1) os << "*z^" << m;
    first = false;
  }
  if (first) os << "0";
  os << "  (mod " << prime_ << "^" << precision_ << ", tail >= " << tail_floor_
     << ")";
  return os.str();
}

Valuation gauss_valuation(const PadicSeries& P) {
  long best = -1;
  bool any = false;
  for (size_t m = 0; m < P.coefficient_count(); ++m) {
    Valuation v = P.coefficient_valuation(m);
    if (v.infinite) continue;
    if (!any || v.value < best) best = v.value;
    any = true;
  }
  if (!any || best >= std::min(P.precision(), P.tail_floor()))
    raise(ErrorCode::IndistinguishableFromZero,
          "all listed coefficient valuations >= min(precision, tail floor)");
  return Valuation::finite(best);
}

long strassman_degree(const PadicSeries& P) {
  long best = -1;
  size_t arg = 0;
  bool any = false;
  for (size_t m = 0; m < P.coefficient_count(); ++m) {
    Valuation v = P.coefficient_valuation(m);
    if (v.infinite) continue;
    if (!any || v.value < best) best = v.value;
    any = true;
  }
  if (!any)
    raise(ErrorCode::IndistinguishableFromZero,
          "series indistinguishable from zero at current precision");
  if (best >= P.tail_floor())
    raise(ErrorCode::TailAmbiguous,
          "tail floor " + std::to_string(P.tail_floor()) +
              " <= gauss valuation " + std::to_string(best));
  for (size_t m = 0; m < P.coefficient_count(); ++m) {
    Valuation v = P.coefficient_valuation(m);
    if (!v.infinite && v.value == best) arg = m;
  }
  return static_cast<long>(arg);
}

long shifted_strassman_index(const PadicSeries& P) {
  if (P.is_constant_at_precision())
    raise(ErrorCode::ConstantSeries, "no positive-index coefficient visible");
  long best = -1;
  size_t arg = 0;
  bool any = false;
  for (size_t m = 1; m < P.coefficient_count(); ++m) {
    Valuation v = P.coefficient_valuation(m);
    if (v.infinite) continue;
    if (!any || v.value < best) {
      best = v.value;
    }
    any = true;
  }
  if (best >= P.tail_floor())
    raise(ErrorCode::TailAmbiguous,
          "tail floor could attain the positive-index minimum");
  for (size_t m = 1; m < P.coefficient_count(); ++m) {
    Valuation v = P.coefficient_valuation(m);
    if (!v.infinite && v.value == best) arg = m;
  }
  return static_cast<long>(arg);
}

long strassman_zero_bound(const PadicSeries& P, const PadicInt& shift) {
  PadicSeries Q = P.shift_constant(-shift);
  try {
    return strassman_degree(Q);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::IndistinguishableFromZero &&
        e.code() != ErrorCode::TailAmbiguous)
      throw;
    if (P.is_constant_at_precision()) throw;  // caller's constant dichotomy
    return shifted_strassman_index(P);
  }
}

// ---------------------------------------------------------------------------
// Weierstrass preparation.
//
// After factoring out p^g, the reduction of P' mod p is a polynomial of
// degree exactly D with unit leading coefficient, coprime to the constant
// candidate unit. Hensel-lift the factorization P' = Q*u through the powers
// of p: at each step solve dQ*u0 + du*Q0 = E in F_p[z], deg dQ < D, du by
// exact division by the monic Q0.
// ---------------------------------------------------------------------------

namespace {

struct FpPoly {
  std::vector<long> c;  // mod p
  long p;

  long degree() const {
    for (size_t i = c.size(); i-- > 0;)
      if (c[i] != 0) return static_cast<long>(i);
    return -1;
  }
};

long mod_inverse(long a, long p) {
  // Fermat; p is a small prime.
  long result = 1;
  long base = ((a % p) + p) % p;
  long e = p - 2;
  while (e > 0) {
    if (e & 1) result = (result * base) % p;
    base = (base * base) % p;
    e >>= 1;
  }
  return result;
}

mpz_class pow_p(long p, long e) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(p),
                static_cast<unsigned long>(e));
  return r;
}

// rem := rem mod div (div monic up to unit lead), quot returned; in F_p[z].
void fp_divmod(const FpPoly& num, const FpPoly& div, FpPoly& quot, FpPoly& rem) {
  long p = num.p;
  rem = num;
  long dd = div.degree();
  quot.p = p;
  quot.c.assign(num.c.size(), 0);
  long lead_inv = mod_inverse(div.c[static_cast<size_t>(dd)], p);
  for (long i = rem.degree(); i >= dd; i = rem.degree()) {
    long coef = (rem.c[static_cast<size_t>(i)] * lead_inv) % p;
    long shift = i - dd;
    quot.c[static_cast<size_t>(shift)] = coef;
    for (long j = 0; j <= dd; ++j) {
      long idx = shift + j;
      rem.c[static_cast<size_t>(idx)] =
          ((rem.c[static_cast<size_t>(idx)] - coef * div.c[static_cast<size_t>(j)]) % p + p) % p;
    }
  }
}

}  // namespace

WeierstrassFactorization weierstrass_prep(const PadicSeries& P) {
  const long p = P.prime();
  Valuation gv = gauss_valuation(P);  // throws when indistinguishable from 0
  const long g = gv.value;
  if (P.precision() - g < 2)
    raise(ErrorCode::PrecisionExhausted,
          "factoring out p^" + std::to_string(g) + " leaves precision " +
              std::to_string(P.precision() - g));
  PadicSeries Pn = P.divide_p_power(g);
  const long Np = Pn.precision();
  const long D = strassman_degree(Pn);
  const size_t M = Pn.truncation_degree();

  // Working degree: u support is kept to W - D so Q*u matches P' on all of
  // 0..W with nothing discarded.
  const size_t W = std::max<size_t>(2 * M, static_cast<size_t>(D) + 8);
  if (W > kMaxKeptDegree)
    raise(ErrorCode::ResourceLimit, "series too long for preparation");

  const mpz_class& mod = padic_modulus(p, Np);
  std::vector<mpz_class> target(W + 1, mpz_class(0));
  for (size_t m = 0; m <= M; ++m) target[m] = Pn.raw_coefficient(m);

  // Initial factors mod p.
  long cD = static_cast<long>(mpz_fdiv_ui(target[static_cast<size_t>(D)].get_mpz_t(),
                                          static_cast<unsigned long>(p)));
  long cD_inv = mod_inverse(cD, p);
  std::vector<mpz_class> Q(static_cast<size_t>(D) + 1, mpz_class(0));
  for (long m = 0; m < D; ++m) {
    long r = static_cast<long>(mpz_fdiv_ui(target[static_cast<size_t>(m)].get_mpz_t(),
                                           static_cast<unsigned long>(p)));
    Q[static_cast<size_t>(m)] = (r * cD_inv) % p;
  }
  Q[static_cast<size_t>(D)] = 1;
  std::vector<mpz_class> U(W - static_cast<size_t>(D) + 1, mpz_class(0));
  U[0] = cD;

  FpPoly Qbar{std::vector<long>(static_cast<size_t>(D) + 1, 0), p};
  for (long m = 0; m <= D; ++m)
    Qbar.c[static_cast<size_t>(m)] =
        static_cast<long>(mpz_get_ui(Q[static_cast<size_t>(m)].get_mpz_t()));

  bool converged = false;
  for (int round = 0; round < Np + 2; ++round) {
    // Residual R = target - Q*U mod p^Np on degrees 0..W.
    std::vector<mpz_class> R = target;
    for (size_t i = 0; i < Q.size(); ++i) {
      if (Q[i] == 0) continue;
      for (size_t j = 0; j < U.size(); ++j) {
        if (U[j] == 0) continue;
        R[i + j] -= Q[i] * U[j];
      }
    }
    long jmin = Np;
    for (auto& c : R) {
      mpz_mod(c.get_mpz_t(), c.get_mpz_t(), mod.get_mpz_t());
      if (c != 0) jmin = std::min(jmin, valuation_of_mpz(c, p));
    }
    if (jmin >= Np) {
      converged = true;
      break;
    }

    const mpz_class& pj = padic_modulus(p, jmin);
    FpPoly E{std::vector<long>(W + 1, 0), p};
    for (size_t m = 0; m <= W; ++m) {
      mpz_class q = R[m] / pj;
      E.c[m] = static_cast<long>(mpz_fdiv_ui(q.get_mpz_t(),
                                             static_cast<unsigned long>(p)));
    }
    // Solve dQ*cD + dU*Qbar = E with deg dQ < D.
    FpPoly quot, rem;
    fp_divmod(E, Qbar, quot, rem);
    // dQ = rem * cD^{-1}; dU = quot.
    for (long m = 0; m < D; ++m) {
      long v = (rem.c[static_cast<size_t>(m)] * cD_inv) % p;
      if (v != 0) Q[static_cast<size_t>(m)] += pj * v;
    }
    for (size_t m = 0; m < U.size() && m < quot.c.size(); ++m) {
      if (quot.c[m] != 0) U[m] += pj * quot.c[m];
    }
    for (auto& c : Q) mpz_mod(c.get_mpz_t(), c.get_mpz_t(), mod.get_mpz_t());
    for (auto& c : U) mpz_mod(c.get_mpz_t(), c.get_mpz_t(), mod.get_mpz_t());
  }

  if (!converged)
    raise(ErrorCode::PrecisionExhausted, "division iteration stalled");

  // Accuracy of the factorization relative to the true (untruncated) P.
  long out_prec = std::min(Np, Pn.tail_floor());

  WeierstrassFactorization f{
      {},
      PadicSeries(p, out_prec, {mpz_class(0)}, 1),
      g,
      out_prec,
  };
  mpz_class pg = pow_p(p, g);
  for (long m = 0; m <= D; ++m) {
    mpz_class c = Q[static_cast<size_t>(m)] * pg;
    long prec = std::min(P.precision(), out_prec + g);
    f.poly_part.emplace_back(p, prec, c);
  }
  // The unit tail: every positive-index coefficient of a Z_p<z> unit has
  // valuation >= 1; if division was exact (constant unit) the tail is zero.
  bool constant_unit = true;
  for (size_t m = 1; m < U.size(); ++m)
    if (U[m] != 0) constant_unit = false;
  long unit_tail = constant_unit ? out_prec : 1L;
  std::vector<mpz_class> ucoeffs(U.begin(), U.end());
  if (constant_unit) ucoeffs.resize(1);
  f.unit_part = PadicSeries(p, out_prec, std::move(ucoeffs), unit_tail);
  return f;
}

// ---------------------------------------------------------------------------
// Root isolation.
// ---------------------------------------------------------------------------

namespace {

struct IsolationContext {
  long prime;
  long original_precision;
  const RootIsolationOptions* opts;
  std::vector<RootRecord>* out;
};

std::string residue_class_label(long p, const mpz_class& center, int scale) {
  std::ostringstream os;
  os << "z = " << center.get_str() << " (mod " << p << "^" << scale << ")";
  return os.str();
}

PadicInt newton_refine(const PadicSeries& Q, long r) {
  long n = std::min(Q.precision(), Q.tail_floor());
  PadicInt zeta(Q.prime(), n, r);
  PadicSeries dQ = Q.derivative();
  for (int it = 0; it < 64; ++it) {
    PadicInt f = Q.evaluate(zeta);
    if (f.is_zero_residue()) break;
    PadicInt d = dQ.evaluate(zeta);
    zeta = zeta - f * d.invert();
  }
  return zeta;
}

void isolate(const IsolationContext& ctx, const PadicSeries& Q,
             const mpz_class& center, int scale, int depth) {
  const long p = ctx.prime;
  long D;
  try {
    D = strassman_degree(Q);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::IndistinguishableFromZero ||
        e.code() == ErrorCode::TailAmbiguous)
      raise(ErrorCode::PrecisionExhausted,
            "cannot resolve " + residue_class_label(p, center, scale));
    throw;
  }
  if (D == 0) return;  // constant term strictly dominates: no zeros here
  if (depth >= ctx.opts->max_depth)
    raise(ErrorCode::PrecisionExhausted,
          "subdivision depth cap at " + residue_class_label(p, center, scale));

  PadicSeries dQ = Q.derivative();
  long eval_prec = std::min(Q.precision(), Q.tail_floor());
  for (long r = 0; r < p; ++r) {
    PadicInt zr(p, eval_prec, r);
    Valuation v0 = Q.evaluate(zr).valuation();
    if (v0.is_zero()) continue;  // |Q| = 1 on this residue class
    Valuation dv = dQ.evaluate(zr).valuation();
    mpz_class scale_pow = pow_p(p, scale);
    if (dv.is_zero()) {
      // Hensel: unique simple root in r + pZ_p.
      PadicInt local = newton_refine(Q, r);
      mpz_class global = center + local.residue() * scale_pow;
      long prec = std::min(ctx.original_precision,
                           static_cast<long>(scale) + local.precision());
      ctx.out->push_back(RootRecord{PadicInt(p, prec, global), true});
      continue;
    }
    // Recurse into the subdisk r + pZ_p.
    mpz_class child_center = center + mpz_class(r) * scale_pow;
    PadicSeries child = Q.compose_linear(zr, PadicInt(p, Q.precision(), p));
    long gc;
    try {
      gc = gauss_valuation(child).value;
    } catch (const Error& e) {
      if (e.code() == ErrorCode::IndistinguishableFromZero)
        raise(ErrorCode::PrecisionExhausted,
              "series vanishes at precision on " +
                  residue_class_label(p, child_center, scale + 1));
      throw;
    }
    PadicSeries childn = child.divide_p_power(gc);
    if (std::min(childn.precision(), childn.tail_floor()) < ctx.opts->min_precision)
      raise(ErrorCode::PrecisionExhausted,
            "precision exhausted at " + residue_class_label(p, child_center, scale + 1));
    isolate(ctx, childn, child_center, scale + 1, depth + 1);
  }
}

}  // namespace

RootList zeros_in_Zp(const PadicSeries& P, const RootIsolationOptions& opts) {
  if (P.is_constant_at_precision())
    raise(ErrorCode::ConstantSeries, "root isolation needs a non-constant series");
  Valuation gv = gauss_valuation(P);
  PadicSeries Pn = P.divide_p_power(gv.value);
  RootList out;
  out.strassman_bound = strassman_degree(Pn);

  IsolationContext ctx{P.prime(), std::min(P.precision(), P.tail_floor()),
                       &opts, &out.roots};
  isolate(ctx, Pn, mpz_class(0), 0, 0);
  std::sort(out.roots.begin(), out.roots.end(),
            [](const RootRecord& a, const RootRecord& b) {
              return a.approximation.residue() < b.approximation.residue();
            });
  return out;
}

}  // namespace padml
