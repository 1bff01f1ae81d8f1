#include "padml/dml.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

namespace padml {

TargetSpec TargetSpec::point(std::vector<mpq_class> values) {
  TargetSpec t;
  t.kind = Kind::POINT;
  t.values = std::move(values);
  for (auto& v : t.values) v.canonicalize();
  return t;
}

TargetSpec TargetSpec::point(std::vector<Polynomial> observables,
                             std::vector<mpq_class> values) {
  TargetSpec t;
  t.kind = Kind::POINT;
  t.observables = std::move(observables);
  t.values = std::move(values);
  for (auto& v : t.values) v.canonicalize();
  if (t.observables.size() != t.values.size())
    raise(ErrorCode::DimensionMismatch, "one value per observable");
  return t;
}

TargetSpec TargetSpec::vanishing(std::vector<Polynomial> equations) {
  TargetSpec t;
  t.kind = Kind::VANISHING;
  t.equations = std::move(equations);
  if (t.equations.empty())
    raise(ErrorCode::InvalidArgument, "vanishing target needs equations");
  return t;
}

PadicSeries compose_observable(const std::vector<PadicSeries>& series,
                               const Polynomial& g) {
  if (series.empty()) raise(ErrorCode::InvalidArgument, "no coordinate series");
  const long p = series[0].prime();
  if (!g.is_p_integral(p))
    raise(ErrorCode::NotPIntegral, "observable has p in a denominator");
  if (g.variables().size() != series.size())
    raise(ErrorCode::DimensionMismatch, "observable arity vs series count");
  long prec = series[0].precision();
  for (const auto& s : series) prec = std::min(prec, s.precision());

  PadicSeries acc = PadicSeries::constant(PadicInt::zero(p, prec));
  std::vector<std::vector<PadicSeries>> powers(series.size());
  auto power = [&](size_t i, unsigned e) -> const PadicSeries& {
    auto& cache = powers[i];
    if (cache.empty()) cache.push_back(series[i]);  // cache[0] = s^1
    while (cache.size() < e) cache.push_back(cache.back() * series[i]);
    return cache[e - 1];
  };

  for (const auto& term : g.terms()) {
    PadicSeries cur =
        PadicSeries::constant(PadicInt::from_rational(term.coefficient, p, prec));
    for (size_t i = 0; i < series.size(); ++i) {
      unsigned e = term.exponents[i];
      if (e == 0) continue;
      cur = cur * power(i, e);
    }
    acc = acc + cur;
  }
  return acc;
}

std::optional<long> uniform_fiber_bound(const std::vector<PadicSeries>& series) {
  if (series.empty()) raise(ErrorCode::InvalidArgument, "empty series list");
  long best = -1;
  for (const auto& s : series) {
    if (s.is_constant_at_precision()) continue;
    best = std::max(best, shifted_strassman_index(s));
  }
  if (best < 0) return std::nullopt;  // ALL_CONSTANT
  return best + 1;
}

// ---------------------------------------------------------------------------
// Solver.
// ---------------------------------------------------------------------------

DmlSolver::DmlSolver(PolyMap map, RationalPoint x, long p, DmlOptions options)
    : map_(std::move(map)), x_(std::move(x)), p_(p), options_(options) {
  if (!good_reduction_check(map_, x_, p_))
    raise(ErrorCode::NotPIntegral, "map or start point not p-integral");
  etale_ = jacobian_unit_check(map_);
  ResiduePeriod rp = residue_period(map_, x_, p_);
  preperiod_ = rp.preperiod;
  step_ = rp.period;
  fit_classes();
}

void DmlSolver::fit_classes() {
  const long M = options_.mahler_coefficients;
  for (int attempt = 0;; ++attempt) {
    fits_.clear();
    bool all_certified = true;
    for (long r = 0; r < step_; ++r) {
      ClassFit fit;
      fit.offset = preperiod_ + r;
      RationalPoint start = iterate(map_, x_, fit.offset, options_.limits);
      fit.expansion = mahler_fit(map_, start, p_, step_, M,
                                 options_.precision, options_.limits);
      fit.certificate = slope_certificate(fit.expansion);
      if (fit.certificate.certified()) {
        try {
          fit.phi = to_power_series(fit.expansion, fit.certificate);
          std::vector<long> holdout;
          for (long h = 1; h <= options_.holdouts; ++h) holdout.push_back(M + h);
          fit.certificate =
              approximant_check(fit.phi, map_, start, step_, holdout,
                                fit.certificate, options_.limits);
        } catch (const Error& e) {
          if (e.code() != ErrorCode::PrecisionExhausted) throw;
          fit.certificate.verdict = CertificateVerdict::INCONCLUSIVE;
        }
      }
      if (!fit.certificate.certified()) all_certified = false;
      fits_.push_back(std::move(fit));
    }
    if (all_certified || attempt >= options_.max_period_doublings) {
      fits_certified_ = all_certified;
      break;
    }
    step_ *= 2;  // slow linearization; pass to a higher iterate and refit
  }
}

std::vector<Polynomial> DmlSolver::target_equations(const TargetSpec& target) const {
  const auto& vars = map_.variables();
  std::vector<Polynomial> eqs;
  if (target.kind == TargetSpec::Kind::VANISHING) {
    eqs = target.equations;
  } else {
    std::vector<Polynomial> obs = target.observables;
    if (obs.empty()) {
      for (size_t i = 0; i < map_.dimension(); ++i)
        obs.push_back(Polynomial::variable(i, vars));
    }
    if (obs.size() != target.values.size())
      raise(ErrorCode::DimensionMismatch, "one target value per observable");
    for (size_t i = 0; i < obs.size(); ++i)
      eqs.push_back(obs[i] - Polynomial::constant(target.values[i], vars));
  }
  for (const auto& e : eqs)
    if (!e.is_p_integral(p_))
      raise(ErrorCode::NotPIntegral, "target equation not p-integral");
  return eqs;
}

std::optional<long> DmlSolver::bound_for(const TargetSpec& target) const {
  if (!fits_certified_) return std::nullopt;
  std::vector<Polynomial> fs;
  if (target.kind == TargetSpec::Kind::VANISHING) {
    fs = target.equations;
  } else if (!target.observables.empty()) {
    fs = target.observables;
  } else {
    for (size_t i = 0; i < map_.dimension(); ++i)
      fs.push_back(Polynomial::variable(i, map_.variables()));
  }
  std::vector<PadicSeries> composed;
  for (const auto& fit : fits_)
    for (const auto& f : fs) composed.push_back(compose_observable(fit.phi, f));
  return uniform_fiber_bound(composed);
}

namespace {

bool target_values_p_integral(const TargetSpec& target, long p) {
  for (const auto& v : target.values)
    if (mpz_divisible_ui_p(v.get_den().get_mpz_t(), static_cast<unsigned long>(p)))
      return false;
  return true;
}

bool satisfies_all(const std::vector<Polynomial>& eqs, const RationalPoint& pt) {
  for (const auto& e : eqs)
    if (e.evaluate(pt) != 0) return false;
  return true;
}

enum class ClassAction { NONE, VERIFY_ALL, CHECK_CANDIDATES };

}  // namespace

DmlSolution DmlSolver::solve(const TargetSpec& target) const {
  DmlSolution sol;
  sol.prime = p_;
  sol.precision = options_.precision;
  sol.horizon = options_.horizon;
  sol.preperiod = preperiod_;
  sol.iterate_step = step_;
  sol.certification = (etale_ && fits_certified_) ? Certification::ETALE_CERTIFIED
                                                  : Certification::HEURISTIC;
  if (!etale_)
    sol.warnings.push_back("heuristic: etale not certified (Jacobian determinant non-constant)");
  if (!fits_certified_)
    sol.warnings.push_back("heuristic: analyticity certification incomplete");

  // Z_p-point observation: a non-p-integral point target has empty fiber.
  if (target.kind == TargetSpec::Kind::POINT &&
      !target_values_p_integral(target, p_)) {
    sol.empty_reason = "NON_INTEGRAL";
    try {
      sol.uniform_bound = bound_for(target);
      sol.all_constant = fits_certified_ && !sol.uniform_bound.has_value();
    } catch (const Error& e) {
      if (e.code() != ErrorCode::TailAmbiguous) throw;
      sol.uniform_bound = std::nullopt;
    }
    return sol;
  }

  std::vector<Polynomial> eqs = target_equations(target);
  const long horizon = options_.horizon;

  std::vector<ClassAction> action(fits_.size(), ClassAction::NONE);
  std::vector<std::set<long>> class_candidates(fits_.size());
  std::set<long> progression_offsets;

  for (size_t idx = 0; idx < fits_.size(); ++idx) {
    const ClassFit& fit = fits_[idx];
    ResidueClassReport report;
    report.offset = fit.offset;
    if (fit.offset > horizon) {
      report.status = "beyond-horizon";
      sol.residue_reports.push_back(report);
      continue;
    }
    const long j_max = (horizon - fit.offset) / step_;

    if (!fit.certificate.certified()) {
      // No trusted analytic model: fall back to exact enumeration of the
      // class members (still exact, just not certified).
      action[idx] = ClassAction::VERIFY_ALL;
      report.status = "uncertified-exact-sweep";
      sol.residue_reports.push_back(report);
      continue;
    }

    std::vector<PadicSeries> composed;
    try {
      for (const auto& e : eqs) composed.push_back(compose_observable(fit.phi, e));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::PrecisionExhausted) throw;
      raise(ErrorCode::PrecisionExhausted,
            "residue class " + std::to_string(fit.offset) + ": " + e.what());
    }

    bool all_zero = true;
    bool impossible = false;
    for (const auto& H : composed) {
      if (H.is_zero_at_precision()) continue;
      all_zero = false;
      if (H.is_constant_at_precision()) impossible = true;  // constant nonzero
    }

    if (impossible) {
      report.status = "constant-nonzero";
      sol.residue_reports.push_back(report);
      continue;
    }
    if (all_zero) {
      // Zero at precision is evidence only; members are verified exactly and
      // the progression is stamped verified-to-horizon.
      action[idx] = ClassAction::VERIFY_ALL;
      progression_offsets.insert(fit.offset);
      report.status = "progression";
      sol.residue_reports.push_back(report);
      continue;
    }

    // Isolate on the non-constant composed series with the smallest
    // Strassman degree, then filter candidates through the rest exactly.
    // A tail floor too weak to certify degrees is precision exhaustion
    // from the caller's point of view.
    RootList roots;
    try {
      int best = -1;
      long best_degree = 0;
      for (size_t i = 0; i < composed.size(); ++i) {
        if (composed[i].is_constant_at_precision() ||
            composed[i].is_zero_at_precision())
          continue;
        long d = strassman_degree(composed[i]);
        if (best < 0 || d < best_degree) {
          best = static_cast<int>(i);
          best_degree = d;
        }
      }
      report.strassman_degree = best_degree;
      report.shifted_bound =
          1 + shifted_strassman_index(composed[static_cast<size_t>(best)]);
      roots = zeros_in_Zp(composed[static_cast<size_t>(best)]);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::PrecisionExhausted ||
          e.code() == ErrorCode::TailAmbiguous)
        raise(ErrorCode::PrecisionExhausted,
              "residue class " + std::to_string(fit.offset) + ": " + e.what());
      throw;
    }
    report.roots_found = static_cast<long>(roots.roots.size());
    report.status = "roots";

    for (const auto& root : roots.roots) {
      // Integers in [0, j_max] congruent to the root approximation; the
      // residue lies in [0, p^K) so a residue beyond j_max means the whole
      // disk misses the index range.
      const mpz_class& mod = root.approximation.modulus();
      const mpz_class& first = root.approximation.residue();
      if (first > j_max) continue;
      mpz_class count_z = (mpz_class(j_max) - first) / mod + 1;
      if (count_z > options_.max_candidates_per_root)
        raise(ErrorCode::ResourceLimit,
              "root disk mod p^" + std::to_string(root.approximation.precision()) +
                  " yields too many candidate indices");
      for (mpz_class j = first; j <= j_max; j += mod) {
        long n = fit.offset + step_ * static_cast<long>(j.get_si());
        class_candidates[idx].insert(n);
      }
      report.candidates_checked += static_cast<long>(count_z.get_si());
      if (count_z > 0) action[idx] = ClassAction::CHECK_CANDIDATES;
    }
    sol.residue_reports.push_back(report);
  }

  // Single exact pass over the orbit, up to the last index anything needs.
  long needed = std::min(horizon, preperiod_ - 1);
  for (size_t idx = 0; idx < fits_.size(); ++idx) {
    if (action[idx] == ClassAction::VERIFY_ALL)
      needed = horizon;
    else if (!class_candidates[idx].empty())
      needed = std::max(needed, *class_candidates[idx].rbegin());
  }

  std::set<long> hits;
  std::map<long, std::vector<long>> progression_failures;  // offset -> n
  std::map<long, std::vector<long>> progression_passes;
  RationalPoint cur = x_;
  for (long n = 0; n <= needed; ++n) {
    if (n > 0) cur = apply_map(map_, cur, options_.limits);
    if (n < preperiod_) {
      if (satisfies_all(eqs, cur)) hits.insert(n);
      continue;
    }
    size_t idx = static_cast<size_t>((n - preperiod_) % step_);
    switch (action[idx]) {
      case ClassAction::NONE:
        break;
      case ClassAction::VERIFY_ALL: {
        bool ok = satisfies_all(eqs, cur);
        long off = fits_[idx].offset;
        if (progression_offsets.count(off)) {
          (ok ? progression_passes : progression_failures)[off].push_back(n);
        } else if (ok) {
          hits.insert(n);  // uncertified sweep
        }
        break;
      }
      case ClassAction::CHECK_CANDIDATES:
        if (class_candidates[idx].count(n) && satisfies_all(eqs, cur))
          hits.insert(n);
        break;
    }
  }

  for (long off : progression_offsets) {
    if (progression_failures.count(off)) {
      // The composed series vanished at precision but the orbit does not:
      // demote to the exactly verified members.
      sol.warnings.push_back(
          "class " + std::to_string(off) +
          ": zero-at-precision series failed exact verification; "
          "emitting verified hits only");
      for (long n : progression_passes[off]) hits.insert(n);
      for (auto& rep : sol.residue_reports)
        if (rep.offset == off) rep.status = "demoted";
    } else {
      sol.progressions.push_back(Progression{step_, off, true});
    }
  }

  sol.exact_hits.assign(hits.begin(), hits.end());
  try {
    sol.uniform_bound = bound_for(target);
    sol.all_constant = fits_certified_ && !sol.uniform_bound.has_value();
  } catch (const Error& e) {
    if (e.code() != ErrorCode::TailAmbiguous) throw;
    sol.uniform_bound = std::nullopt;
    sol.warnings.push_back(
        "uniform bound unavailable: tail floor cannot certify the composed "
        "observable degrees");
  }
  return sol;
}

DmlSolution solve_dml(const PolyMap& map, const RationalPoint& x,
                      const TargetSpec& target, long p, const DmlOptions& options) {
  DmlSolver solver(map, x, p, options);
  return solver.solve(target);
}

// ---------------------------------------------------------------------------
// Return sets, density, witnesses, fibers.
// ---------------------------------------------------------------------------

std::vector<ReturnSet> return_set(const PolyMap& map, const RationalPoint& x,
                                  const Polynomial& f_num, const Polynomial& f_den,
                                  long p, long horizon,
                                  const IterationLimits& limits) {
  if (horizon < 0) raise(ErrorCode::InvalidArgument, "horizon must be >= 0");
  ReturnSet v1, v2;
  v1.chart_id = 1;
  v2.chart_id = 2;
  v1.horizon = v2.horizon = horizon;

  RationalPoint cur = x;
  for (long n = 0; n <= horizon; ++n) {
    if (n > 0) cur = apply_map(map, cur, limits);
    mpq_class a = f_num.evaluate(cur);
    mpq_class b = f_den.evaluate(cur);
    if (a == 0 && b == 0) {
      v1.indeterminate.push_back(n);
      v2.indeterminate.push_back(n);
      continue;
    }
    // [a : b] with both p-integral along a good-reduction orbit; after
    // clearing the common valuation, membership follows the unit coordinate.
    long va = (a == 0) ? -1 : valuation_of_mpq(a, p);
    long vb = (b == 0) ? -1 : valuation_of_mpq(b, p);
    bool in_v1;
    if (b == 0)
      in_v1 = false;
    else if (a == 0)
      in_v1 = true;
    else
      in_v1 = vb <= va;  // denominator is the unit after clearing
    (in_v1 ? v1 : v2).members.push_back(n);
  }

  long window = std::min<long>(horizon + 1, 100);
  v1.complement_density = banach_density_gap(v1, window);
  v2.complement_density = banach_density_gap(v2, window);
  return {v1, v2};
}

mpq_class banach_density_gap(const ReturnSet& S, long window) {
  const long horizon = S.horizon;
  if (window < 1 || window > horizon + 1)
    raise(ErrorCode::InvalidArgument, "window must lie in [1, horizon + 1]");
  std::vector<char> in_set(static_cast<size_t>(horizon) + 1, 0);
  for (long n : S.members)
    if (n >= 0 && n <= horizon) in_set[static_cast<size_t>(n)] = 1;

  long count = 0;
  for (long i = 0; i < window; ++i) count += in_set[static_cast<size_t>(i)] ? 0 : 1;
  long best = count;
  for (long i = window; i <= horizon; ++i) {
    count += in_set[static_cast<size_t>(i)] ? 0 : 1;
    count -= in_set[static_cast<size_t>(i - window)] ? 0 : 1;
    best = std::max(best, count);
  }
  mpq_class q(best, window);
  q.canonicalize();
  return q;
}

ReturnRateWitness return_rate_witness(const std::vector<ReturnSet>& charts,
                                      long kappa) {
  if (charts.empty()) raise(ErrorCode::InvalidArgument, "no charts");
  if (kappa != static_cast<long>(charts.size()))
    raise(ErrorCode::InvalidArgument, "kappa must equal the chart count");
  const long horizon = charts[0].horizon;

  ReturnRateWitness best;
  size_t best_count = 0;
  bool found = false;
  for (const auto& chart : charts) {
    std::vector<long> prefix(static_cast<size_t>(horizon) + 2, 0);
    std::vector<char> in_set(static_cast<size_t>(horizon) + 1, 0);
    for (long n : chart.members)
      if (n >= 0 && n <= horizon) in_set[static_cast<size_t>(n)] = 1;
    for (long i = 0; i <= horizon; ++i)
      prefix[static_cast<size_t>(i) + 1] =
          prefix[static_cast<size_t>(i)] + (in_set[static_cast<size_t>(i)] ? 1 : 0);

    std::vector<long> witnesses;
    for (long M = 1; kappa * M <= horizon; ++M) {
      long c = prefix[static_cast<size_t>(kappa * M) + 1];  // #{n <= kappa M}
      if (c >= M) witnesses.push_back(M);
      if (witnesses.size() >= 64) break;
    }
    if (!witnesses.empty() && witnesses.size() > best_count) {
      best.chart_id = chart.chart_id;
      best.witnesses = witnesses;
      best_count = witnesses.size();
      found = true;
    }
  }
  if (!found)
    raise(ErrorCode::HorizonTooSmall, "no return-rate witness below horizon");
  return best;
}

FiberReport fiber_report(const PadicSeries& H, const std::optional<mpq_class>& t,
                         const ReturnSet& S, long M) {
  FiberReport report;
  if (!t.has_value())
    raise(ErrorCode::InvalidArgument, "fiber target required");
  const long p = H.prime();
  if (mpz_divisible_ui_p(t->get_den().get_mpz_t(), static_cast<unsigned long>(p))) {
    report.non_integral = true;  // cannot extend to a Z_p-point: empty fiber
    return report;
  }
  if (H.is_constant_at_precision())
    raise(ErrorCode::ConstantSeries, "fiber bound path needs non-constant H");

  PadicInt shift = PadicInt::from_rational(*t, p, H.precision());
  report.strassman_bound = strassman_zero_bound(H, shift);

  PadicSeries shifted = H.shift_constant(-shift);
  RootList roots = zeros_in_Zp(shifted);
  std::set<long> member_set(S.members.begin(), S.members.end());
  for (const auto& root : roots.roots) {
    const mpz_class& mod = root.approximation.modulus();
    for (mpz_class n = root.approximation.residue(); n <= M; n += mod) {
      long nn = static_cast<long>(n.get_si());
      if (member_set.count(nn)) report.hits.push_back(nn);
    }
  }
  std::sort(report.hits.begin(), report.hits.end());
  report.hits.erase(std::unique(report.hits.begin(), report.hits.end()),
                    report.hits.end());
  report.observed_count = static_cast<long>(report.hits.size());
  report.fitted_c3 =
      (M >= 2) ? static_cast<double>(report.observed_count) /
                     std::log(static_cast<double>(M))
               : 0.0;
  return report;
}

}  // namespace padml
