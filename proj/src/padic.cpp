#include "padml/padic.hpp"

#include <map>
#include <sstream>

namespace padml {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NotPIntegral: return "NotPIntegral";
    case ErrorCode::PrimeMismatch: return "PrimeMismatch";
    case ErrorCode::NotAUnit: return "NotAUnit";
    case ErrorCode::OutOfConvergenceDomain: return "OutOfConvergenceDomain";
    case ErrorCode::IndistinguishableFromZero: return "IndistinguishableFromZero";
    case ErrorCode::TailAmbiguous: return "TailAmbiguous";
    case ErrorCode::ConstantSeries: return "ConstantSeries";
    case ErrorCode::PrecisionExhausted: return "PrecisionExhausted";
    case ErrorCode::UncertifiedExpansion: return "UncertifiedExpansion";
    case ErrorCode::NotPeriodicResidue: return "NotPeriodicResidue";
    case ErrorCode::ResourceLimit: return "ResourceLimit";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UnknownVariable: return "UnknownVariable";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::HorizonTooSmall: return "HorizonTooSmall";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::IndeterminatePoint: return "IndeterminatePoint";
  }
  return "Error";
}

const mpz_class& padic_modulus(long prime, long precision) {
  thread_local std::map<std::pair<long, long>, mpz_class> cache;
  auto key = std::make_pair(prime, precision);
  auto it = cache.find(key);
  if (it == cache.end()) {
    mpz_class m;
    mpz_ui_pow_ui(m.get_mpz_t(), static_cast<unsigned long>(prime),
                  static_cast<unsigned long>(precision));
    it = cache.emplace(key, std::move(m)).first;
  }
  return it->second;
}

PadicInt::PadicInt(long prime, long precision, mpz_class residue)
    : prime_(prime), precision_(precision), residue_(std::move(residue)) {
  if (prime_ < 5)
    raise(ErrorCode::InvalidArgument,
          "prime must be >= 5, got " + std::to_string(prime_));
  if (precision_ < 1)
    raise(ErrorCode::InvalidArgument,
          "precision must be >= 1, got " + std::to_string(precision_));
  modulus_ = padic_modulus(prime_, precision_);
  mpz_mod(residue_.get_mpz_t(), residue_.get_mpz_t(), modulus_.get_mpz_t());
}

PadicInt PadicInt::from_rational(const mpz_class& num, const mpz_class& den,
                                 long prime, long precision) {
  if (den == 0) raise(ErrorCode::InvalidArgument, "zero denominator");
  mpq_class q(num, den);
  q.canonicalize();
  return from_rational(q, prime, precision);
}

PadicInt PadicInt::from_rational(const mpq_class& q_in, long prime, long precision) {
  mpq_class q = q_in;
  q.canonicalize();  // p-integrality is a property of the reduced fraction
  const mpz_class& den = q.get_den();
  if (mpz_divisible_ui_p(den.get_mpz_t(), static_cast<unsigned long>(prime)))
    raise(ErrorCode::NotPIntegral,
          "denominator " + den.get_str() + " divisible by " + std::to_string(prime));
  const mpz_class& mod = padic_modulus(prime, precision);
  mpz_class inv;
  if (!mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), mod.get_mpz_t()))
    raise(ErrorCode::NotPIntegral, "denominator not invertible mod p^N");
  mpz_class r = q.get_num() * inv;
  return PadicInt(prime, precision, std::move(r));
}

Valuation PadicInt::valuation() const {
  if (residue_ == 0) return Valuation::inf();
  return Valuation::finite(valuation_of_mpz(residue_, prime_));
}

PadicInt PadicInt::with_precision(long new_precision) const {
  if (new_precision == precision_) return *this;
  if (new_precision > precision_)
    raise(ErrorCode::InvalidArgument, "cannot raise precision");
  return PadicInt(prime_, new_precision, residue_);
}

void check_same_prime(const PadicInt& a, const PadicInt& b) {
  if (a.prime() != b.prime())
    raise(ErrorCode::PrimeMismatch, std::to_string(a.prime()) + " vs " +
                                        std::to_string(b.prime()));
}

PadicInt PadicInt::operator+(const PadicInt& o) const {
  check_same_prime(*this, o);
  long n = std::min(precision_, o.precision_);
  return PadicInt(prime_, n, residue_ + o.residue_);
}

PadicInt PadicInt::operator-(const PadicInt& o) const {
  check_same_prime(*this, o);
  long n = std::min(precision_, o.precision_);
  return PadicInt(prime_, n, residue_ - o.residue_);
}

PadicInt PadicInt::operator*(const PadicInt& o) const {
  check_same_prime(*this, o);
  long n = std::min(precision_, o.precision_);
  return PadicInt(prime_, n, residue_ * o.residue_);
}

PadicInt PadicInt::operator-() const {
  return PadicInt(prime_, precision_, -residue_);
}

bool PadicInt::operator==(const PadicInt& o) const {
  return prime_ == o.prime_ && precision_ == o.precision_ &&
         residue_ == o.residue_;
}

PadicInt PadicInt::pow(unsigned long k) const {
  mpz_class r;
  mpz_powm_ui(r.get_mpz_t(), residue_.get_mpz_t(), k, modulus_.get_mpz_t());
  return PadicInt(prime_, precision_, std::move(r));
}

PadicInt PadicInt::invert() const {
  if (!valuation().is_zero())
    raise(ErrorCode::NotAUnit,
          "cannot invert " + to_string() + " (valuation > 0)");
  mpz_class inv;
  mpz_invert(inv.get_mpz_t(), residue_.get_mpz_t(), modulus_.get_mpz_t());
  return PadicInt(prime_, precision_, std::move(inv));
}

PadicInt PadicInt::divide_p_power(long k) const {
  if (k == 0) return *this;
  if (k < 0 || k >= precision_)
    raise(ErrorCode::PrecisionExhausted,
          "cannot divide by p^" + std::to_string(k) + " at precision " +
              std::to_string(precision_));
  const mpz_class& pk = padic_modulus(prime_, k);
  if (!mpz_divisible_p(residue_.get_mpz_t(), pk.get_mpz_t()))
    raise(ErrorCode::NotPIntegral,
          "residue not divisible by p^" + std::to_string(k));
  mpz_class r = residue_ / pk;
  return PadicInt(prime_, precision_ - k, std::move(r));
}

std::string PadicInt::to_string() const {
  std::ostringstream os;
  os << residue_.get_str() << " mod " << prime_ << "^" << precision_;
  return os.str();
}

long valuation_of_factorial(unsigned long k, long p) {
  // Legendre: (k - digitsum_p(k)) / (p - 1).
  unsigned long s = 0, n = k;
  while (n > 0) {
    s += n % static_cast<unsigned long>(p);
    n /= static_cast<unsigned long>(p);
  }
  return static_cast<long>((k - s) / static_cast<unsigned long>(p - 1));
}

long valuation_of_mpz(const mpz_class& n, long p) {
  if (n == 0) return -1;
  mpz_class rest;
  return static_cast<long>(
      mpz_remove(rest.get_mpz_t(), n.get_mpz_t(), mpz_class(p).get_mpz_t()));
}

long valuation_of_mpq(const mpq_class& q, long p) {
  if (q == 0) raise(ErrorCode::InvalidArgument, "valuation of 0");
  return valuation_of_mpz(q.get_num(), p) - valuation_of_mpz(q.get_den(), p);
}

namespace {

long ilog_base(long p, unsigned long k) {
  long e = 0;
  unsigned long pw = static_cast<unsigned long>(p);
  while (pw <= k) {
    e++;
    pw *= static_cast<unsigned long>(p);
  }
  return e;
}

}  // namespace

PadicInt padic_log(const PadicInt& u) {
  const long p = u.prime();
  const long N = u.precision();
  PadicInt one(p, N, 1);
  PadicInt x = u - one;
  if (!x.is_zero_residue() && x.valuation().clamped(N) < 1)
    raise(ErrorCode::OutOfConvergenceDomain,
          "log requires u = 1 mod p, got " + u.to_string());
  if (x.is_zero_residue()) return PadicInt::zero(p, N);
  const long w = x.valuation().value;

  // Sum log(1+x) = sum (-1)^(k+1) x^k / k over the canonical lift, exactly
  // in Q, then reduce. Terms with k*w - v_p(k) >= N cannot affect the result;
  // k*w - log_p(k) is increasing in k for p >= 5.
  mpq_class sum = 0;
  mpz_class xk = 1;
  const mpz_class& lift = x.residue();
  for (unsigned long k = 1;; ++k) {
    long bound = static_cast<long>(k) * w - ilog_base(p, k);
    if (bound >= N) break;
    xk *= lift;
    mpq_class term(xk, mpz_class(k));
    term.canonicalize();
    if (k % 2 == 0) term = -term;
    sum += term;
    if (k > 100000)
      raise(ErrorCode::ResourceLimit, "log series did not truncate");
  }
  return PadicInt::from_rational(sum, p, N);
}

PadicInt padic_exp(const PadicInt& v) {
  const long p = v.prime();
  const long N = v.precision();
  if (!v.is_zero_residue() && v.valuation().clamped(N) < 1)
    raise(ErrorCode::OutOfConvergenceDomain,
          "exp requires v = 0 mod p, got " + v.to_string());
  if (v.is_zero_residue()) return PadicInt(p, N, 1);
  const long w = v.valuation().value;

  // k*w - v_p(k!) >= k*w - (k-1)/(p-1), increasing for p >= 5.
  mpq_class sum = 1;
  mpz_class vk = 1;
  mpz_class kfact = 1;
  const mpz_class& lift = v.residue();
  for (unsigned long k = 1;; ++k) {
    long bound = static_cast<long>(k) * w - (static_cast<long>(k) - 1) / (p - 1);
    if (bound >= N) break;
    vk *= lift;
    kfact *= k;
    mpq_class term(vk, kfact);
    term.canonicalize();
    sum += term;
    if (k > 100000)
      raise(ErrorCode::ResourceLimit, "exp series did not truncate");
  }
  return PadicInt::from_rational(sum, p, N);
}

}  // namespace padml
