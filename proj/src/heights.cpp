#include "padml/heights.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace padml {

double log_of_mpz(const mpz_class& n) {
  if (n == 0) raise(ErrorCode::InvalidArgument, "log of zero");
  signed long exp2;
  double d = mpz_get_d_2exp(&exp2, n.get_mpz_t());
  return std::log(std::fabs(d)) + static_cast<double>(exp2) * std::log(2.0);
}

HeightValue HeightValue::of_rational(const mpq_class& q) {
  HeightValue h;
  h.num = q.get_num();
  h.den = q.get_den();
  mpz_class m = std::max(mpz_class(abs(h.num)), h.den);
  h.value = (m <= 1) ? 0.0 : log_of_mpz(m);
  return h;
}

HeightValue HeightValue::of_projective(const mpz_class& a, const mpz_class& b) {
  if (a == 0 && b == 0)
    raise(ErrorCode::IndeterminatePoint, "[0:0] is not a point of P^1");
  if (b == 0) return infinity_point();
  mpq_class q(a, b);
  q.canonicalize();
  return of_rational(q);
}

HeightValue HeightValue::infinity_point() {
  HeightValue h;
  h.num = 1;
  h.den = 0;
  h.value = 0.0;
  return h;
}

long count_height_le(long N, long cap) {
  if (N < 1) raise(ErrorCode::InvalidArgument, "N must be >= 1");
  if (N > cap)
    raise(ErrorCode::ResourceLimit,
          "N = " + std::to_string(N) + " beyond cap " + std::to_string(cap));
  long count = 0;
  for (long b = 1; b <= N; ++b)
    for (long a = -N; a <= N; ++a)
      if (std::gcd(std::labs(a), b) == 1) count++;
  return count;
}

GapReport gap_ratio_series(const PolyMap& map, const RationalPoint& x,
                           const Polynomial& f_num, const Polynomial& f_den,
                           long n_max, const IterationLimits& limits) {
  GapReport report;
  report.n_max = n_max;
  report.records.reserve(static_cast<size_t>(n_max) + 1);

  // First-occurrence tracking on exact reduced pairs for the stabilization
  // heuristic; the report stays a desk-scale verdict and records n_max.
  std::map<std::pair<std::string, std::string>, long> first_seen;
  double running_max = 0.0;
  RationalPoint cur = x;

  for (long n = 0; n <= n_max; ++n) {
    if (n > 0) cur = apply_map(map, cur, limits);
    mpq_class a = f_num.evaluate(cur);
    mpq_class b = f_den.evaluate(cur);

    GapRecord rec;
    rec.n = n;
    if (a == 0 && b == 0) {
      rec.defined = false;
      rec.running_max = running_max;
      report.records.push_back(std::move(rec));
      continue;
    }
    mpz_class pa, pb;
    if (b == 0) {
      pa = 1;
      pb = 0;
    } else {
      mpq_class v = a / b;
      v.canonicalize();
      pa = v.get_num();
      pb = v.get_den();
    }
    rec.height = HeightValue::of_projective(pa, pb);
    if (n >= 2) {
      // Same log routine as the height value, so h = log n divides to 1.0.
      rec.ratio = rec.height.value / log_of_mpz(mpz_class(n));
      rec.has_ratio = true;
      running_max = std::max(running_max, rec.ratio);
    }
    rec.running_max = running_max;

    auto key = std::make_pair(pa.get_str(), pb.get_str());
    auto it = first_seen.find(key);
    if (it == first_seen.end()) {
      first_seen.emplace(std::move(key), n);
      report.last_new_value_index = n;
    }
    report.records.push_back(std::move(rec));
  }

  report.distinct_values = static_cast<long>(first_seen.size());
  report.running_max_ratio = running_max;

  double tail_min = 0.0;
  bool tail_any = false;
  for (const auto& rec : report.records) {
    if (!rec.defined || !rec.has_ratio) continue;
    if (rec.n < n_max / 2) continue;
    if (!tail_any || rec.ratio < tail_min) tail_min = rec.ratio;
    tail_any = true;
  }
  report.running_min_ratio_tail = tail_any ? tail_min : 0.0;

  // Finite image suspected when no new value shows up in the last half.
  report.classification = (report.last_new_value_index <= n_max / 2)
                              ? GapClassification::FINITE_IMAGE_SUSPECTED
                              : GapClassification::POSITIVE_LIMSUP_WITNESSED;
  return report;
}

TailSummary limsup_liminf_summary(const GapReport& report, double tail_fraction) {
  if (tail_fraction <= 0.0 || tail_fraction > 1.0)
    raise(ErrorCode::InvalidArgument, "tail fraction in (0, 1]");
  long start = static_cast<long>(
      static_cast<double>(report.n_max) * (1.0 - tail_fraction));
  TailSummary out;
  long defined_tail = 0;
  bool any = false;
  for (const auto& rec : report.records) {
    if (!rec.defined || !rec.has_ratio || rec.n < start) continue;
    defined_tail++;
    if (!any) {
      out.max_tail_ratio = out.min_tail_ratio = rec.ratio;
      any = true;
    } else {
      out.max_tail_ratio = std::max(out.max_tail_ratio, rec.ratio);
      out.min_tail_ratio = std::min(out.min_tail_ratio, rec.ratio);
    }
  }
  if (defined_tail < 10)
    raise(ErrorCode::InsufficientData,
          "only " + std::to_string(defined_tail) + " defined tail records");

  // Divergence: the max ratio over doubling prefixes strictly increases.
  std::vector<double> prefix_max;
  for (long len = std::max(4L, report.n_max / 64); len <= report.n_max; len *= 2) {
    double m = 0.0;
    for (const auto& rec : report.records) {
      if (rec.n > len) break;
      if (rec.defined && rec.has_ratio) m = std::max(m, rec.ratio);
    }
    prefix_max.push_back(m);
  }
  out.divergence_flag = prefix_max.size() >= 3;
  for (size_t i = 1; i < prefix_max.size(); ++i)
    if (prefix_max[i] <= prefix_max[i - 1]) out.divergence_flag = false;
  return out;
}

}  // namespace padml
