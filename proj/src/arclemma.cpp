#include "padml/arclemma.hpp"

#include <algorithm>

namespace padml {

namespace {

// v_p over all coordinates of an exact rational vector difference; the
// entries must be p-integral.
Valuation vector_valuation(const std::vector<mpq_class>& v, long p) {
  bool all_zero = true;
  long best = 0;
  bool any = false;
  for (const auto& q : v) {
    if (q == 0) continue;
    all_zero = false;
    long val = valuation_of_mpq(q, p);
    if (!any || val < best) best = val;
    any = true;
  }
  if (all_zero) return Valuation::inf();
  return Valuation::finite(best);
}

}  // namespace

MahlerExpansion mahler_fit(const PolyMap& map, const RationalPoint& x, long p,
                           long D, long M, long precision,
                           const IterationLimits& limits) {
  if (M < 4) raise(ErrorCode::InvalidArgument, "need at least 4 coefficients");
  if (D < 1) raise(ErrorCode::InvalidArgument, "iterate step must be >= 1");
  if (!good_reduction_check(map, x, p))
    raise(ErrorCode::NotPIntegral, "map or point not p-integral");

  ResiduePoint xbar = reduce_point_mod_p(x, p);
  ResiduePoint stepped = xbar;
  for (long i = 0; i < D; ++i) stepped = apply_map_mod_p(map, stepped, p);
  if (stepped != xbar)
    raise(ErrorCode::NotPeriodicResidue,
          "residue point is not fixed by the reduced Phi^" + std::to_string(D));

  const size_t dim = map.dimension();
  MahlerExpansion out;
  out.prime = p;
  out.precision = precision;
  out.iterate_step = D;
  out.fit_points = M;
  out.exact_coefficients.assign(dim, {});
  out.coefficients.assign(dim, {});

  // Orbit of Phi^D at nodes 0..M, exact.
  std::vector<RationalPoint> nodes;
  nodes.reserve(static_cast<size_t>(M) + 1);
  RationalPoint cur = x;
  nodes.push_back(cur);
  for (long j = 1; j <= M; ++j) {
    for (long s = 0; s < D; ++s) cur = apply_map(map, cur, limits);
    nodes.push_back(cur);
  }

  // Forward difference table; row k holds Delta^k y at shrinking length.
  std::vector<std::vector<mpq_class>> row(dim);
  for (size_t c = 0; c < dim; ++c) {
    row[c].reserve(nodes.size());
    for (const auto& pt : nodes) row[c].push_back(pt[c]);
  }
  for (long k = 0; k <= M; ++k) {
    std::vector<mpq_class> ck(dim);
    for (size_t c = 0; c < dim; ++c) ck[c] = row[c][0];
    out.decay.push_back(vector_valuation(ck, p));
    for (size_t c = 0; c < dim; ++c) {
      out.exact_coefficients[c].push_back(ck[c]);
      out.coefficients[c].push_back(PadicInt::from_rational(ck[c], p, precision));
      for (size_t i = 0; i + 1 < row[c].size(); ++i)
        row[c][i] = row[c][i + 1] - row[c][i];
      if (!row[c].empty()) row[c].pop_back();
    }
  }
  return out;
}

std::vector<mpq_class> mahler_evaluate_exact(const MahlerExpansion& expansion,
                                             long n) {
  const size_t dim = expansion.exact_coefficients.size();
  std::vector<mpq_class> out(dim, mpq_class(0));
  mpz_class binom;
  for (long k = 0; k <= expansion.fit_points && k <= n; ++k) {
    mpz_bin_uiui(binom.get_mpz_t(), static_cast<unsigned long>(n),
                 static_cast<unsigned long>(k));
    for (size_t c = 0; c < dim; ++c)
      out[c] += expansion.exact_coefficients[c][static_cast<size_t>(k)] * binom;
  }
  return out;
}

AnalyticityCertificate slope_certificate(const MahlerExpansion& expansion) {
  AnalyticityCertificate cert;
  const long M = expansion.fit_points;
  const long p = expansion.prime;
  const long start = M / 2 + 1;

  // Censored values: an exactly-zero coefficient only witnesses "at least
  // full precision", which is the conservative substitute.
  bool all_infinite = true;
  std::vector<std::pair<long, long>> pts;
  for (long k = start; k <= M; ++k) {
    const Valuation& v = expansion.decay[static_cast<size_t>(k)];
    if (!v.infinite) all_infinite = false;
    pts.emplace_back(k, v.clamped(expansion.precision));
  }
  if (all_infinite) {
    cert.slope_infinite = true;
    cert.verdict = CertificateVerdict::CERTIFIED_CANDIDATE;
    return cert;
  }
  if (pts.size() < 2) {
    cert.verdict = CertificateVerdict::INCONCLUSIVE;
    return cert;
  }

  // Exact least squares over Q.
  mpq_class sk = 0, sv = 0, skk = 0, skv = 0;
  for (auto [k, v] : pts) {
    sk += k;
    sv += v;
    skk += static_cast<long>(k) * k;
    skv += static_cast<long>(k) * v;
  }
  mpq_class npts(static_cast<long>(pts.size()));
  mpq_class denom = npts * skk - sk * sk;
  if (denom == 0) {
    cert.verdict = CertificateVerdict::INCONCLUSIVE;
    return cert;
  }
  cert.slope = (npts * skv - sk * sv) / denom;
  cert.slope.canonicalize();
  cert.intercept = (sv - cert.slope * sk) / npts;
  cert.intercept.canonicalize();

  mpq_class boundary(1, p - 1);
  cert.verdict = (cert.slope > boundary)
                     ? CertificateVerdict::CERTIFIED_CANDIDATE
                     : CertificateVerdict::INCONCLUSIVE;
  return cert;
}

namespace {

long ceil_to_long(const mpq_class& q) {
  mpz_class r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
  return static_cast<long>(r.get_si());
}

// Floor over k > M of ceil(alpha*k + beta) - v_p(k!), the valuation that an
// omitted Mahler term can contribute at.
long tail_error_floor(const mpq_class& alpha, const mpq_class& beta, long M,
                      long p, long precision) {
  mpq_class lin_slope = alpha - mpq_class(1, p - 1);
  if (lin_slope <= 0) return 0;
  long best = precision;
  for (long k = M + 1;; ++k) {
    long e = ceil_to_long(alpha * k + beta) - valuation_of_factorial(
                                                  static_cast<unsigned long>(k), p);
    best = std::min(best, e);
    // linear lower bound L(k) <= E(k'), increasing; once it clears best the
    // scan is complete
    mpq_class lower = lin_slope * (k + 1) + beta + mpq_class(1, p - 1);
    if (lower >= best || k > M + 64 * precision) break;
  }
  return best;
}

}  // namespace

std::vector<PadicSeries> to_power_series(const MahlerExpansion& expansion,
                                         const AnalyticityCertificate& cert) {
  if (!cert.certified())
    raise(ErrorCode::UncertifiedExpansion,
          "power series conversion requires a certified candidate");
  const long p = expansion.prime;
  const long M = expansion.fit_points;
  const long N = expansion.precision;

  long out_prec, tail_floor;
  if (cert.slope_infinite) {
    // Measured tail vanished exactly; the expansion is carried as exact.
    out_prec = N;
    tail_floor = N;
  } else {
    long E = tail_error_floor(cert.slope, cert.intercept, M, p, N);
    out_prec = std::min(N, E);
    if (out_prec < 1)
      raise(ErrorCode::PrecisionExhausted,
            "certified decay too weak to report any digits");
    tail_floor = std::clamp(E, 1L, out_prec);
  }

  // Falling-factorial expansion: z(z-1)...(z-k+1) = sum_j s(k,j) z^j with
  // signed Stirling numbers of the first kind, exact over Z.
  std::vector<std::vector<mpz_class>> stirling(static_cast<size_t>(M) + 1);
  stirling[0] = {mpz_class(1)};
  for (long k = 1; k <= M; ++k) {
    const auto& prev = stirling[static_cast<size_t>(k - 1)];
    std::vector<mpz_class> cur(prev.size() + 1, mpz_class(0));
    // multiply by (z - (k-1))
    for (size_t j = 0; j < prev.size(); ++j) {
      cur[j + 1] += prev[j];
      cur[j] -= prev[j] * (k - 1);
    }
    stirling[static_cast<size_t>(k)] = std::move(cur);
  }
  std::vector<mpz_class> factorial(static_cast<size_t>(M) + 1);
  factorial[0] = 1;
  for (long k = 1; k <= M; ++k)
    factorial[static_cast<size_t>(k)] = factorial[static_cast<size_t>(k - 1)] * k;

  std::vector<PadicSeries> out;
  for (const auto& coeffs : expansion.exact_coefficients) {
    std::vector<mpq_class> power(static_cast<size_t>(M) + 1, mpq_class(0));
    for (long k = 0; k <= M; ++k) {
      if (coeffs[static_cast<size_t>(k)] == 0) continue;
      mpq_class scaled = coeffs[static_cast<size_t>(k)] /
                         mpq_class(factorial[static_cast<size_t>(k)]);
      scaled.canonicalize();
      const auto& st = stirling[static_cast<size_t>(k)];
      for (size_t j = 0; j < st.size(); ++j) {
        if (st[j] == 0) continue;
        power[j] += scaled * mpq_class(st[j]);
      }
    }
    for (auto& q : power) q.canonicalize();
    // Partial sums of a Z_p<z> function: reducible only at the certified
    // output precision.
    std::vector<mpz_class> residues;
    residues.reserve(power.size());
    for (const auto& q : power) {
      if (q != 0 && valuation_of_mpq(q, p) < 0)
        raise(ErrorCode::PrecisionExhausted,
              "truncated coefficient not p-integral; decay certificate too weak");
      residues.push_back(PadicInt::from_rational(q, p, out_prec).residue());
    }
    out.emplace_back(p, out_prec, std::move(residues), tail_floor);
  }
  return out;
}

AnalyticityCertificate approximant_check(const std::vector<PadicSeries>& series,
                                         const PolyMap& map,
                                         const RationalPoint& x, long D,
                                         const std::vector<long>& sample_ns,
                                         AnalyticityCertificate cert,
                                         const IterationLimits& limits) {
  if (series.empty()) raise(ErrorCode::InvalidArgument, "no series");
  const long p = series[0].prime();
  long reported = series[0].precision();
  long fit_top = 0;
  for (const auto& s : series) {
    reported = std::min(reported, s.precision());
    fit_top = std::max<long>(fit_top, static_cast<long>(s.truncation_degree()));
  }
  for (long n : sample_ns)
    if (n <= fit_top)
      raise(ErrorCode::InvalidArgument,
            "sample node " + std::to_string(n) + " is a fit node");

  std::vector<long> sorted = sample_ns;
  std::sort(sorted.begin(), sorted.end());
  RationalPoint cur = x;
  long at = 0;
  std::vector<HoldoutRecord> records;
  for (long n : sorted) {
    if (n < 0) raise(ErrorCode::InvalidArgument, "negative sample node");
    while (at < n * D) {
      cur = apply_map(map, cur, limits);
      at++;
    }
    HoldoutRecord rec;
    rec.n = n;
    rec.threshold = std::min(n, reported);
    long margin_prec = reported;
    Valuation worst = Valuation::inf();
    for (size_t c = 0; c < series.size(); ++c) {
      PadicInt phi_n = series[c].evaluate(PadicInt(p, reported, n));
      margin_prec = std::min(margin_prec, phi_n.precision());
      PadicInt exact = PadicInt::from_rational(cur[c], p, phi_n.precision());
      Valuation v = (exact - phi_n).valuation();
      if (v < worst) worst = v;
    }
    rec.observed = worst;
    rec.threshold = std::min(rec.threshold, margin_prec);
    rec.pass = !(worst < Valuation::finite(rec.threshold));
    if (!rec.pass) cert.verdict = CertificateVerdict::INCONCLUSIVE;
    records.push_back(rec);
  }
  cert.holdout_report.insert(cert.holdout_report.end(), records.begin(),
                             records.end());
  return cert;
}

}  // namespace padml
