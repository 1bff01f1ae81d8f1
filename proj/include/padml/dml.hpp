#ifndef PADML_DML_HPP
#define PADML_DML_HPP

#include <optional>
#include <string>
#include <vector>

#include "padml/arclemma.hpp"
#include "padml/dynsys.hpp"
#include "padml/series.hpp"

namespace padml {

// Either a point target (observables f_i = values y_i; observables default
// to the coordinate functions) or a subvariety given as a vanishing locus.
struct TargetSpec {
  enum class Kind { POINT, VANISHING };
  Kind kind = Kind::POINT;
  std::vector<Polynomial> observables;
  std::vector<mpq_class> values;
  std::vector<Polynomial> equations;  // VANISHING

  static TargetSpec point(std::vector<mpq_class> values);
  static TargetSpec point(std::vector<Polynomial> observables,
                          std::vector<mpq_class> values);
  static TargetSpec vanishing(std::vector<Polynomial> equations);
};

struct Progression {
  long modulus = 1;  // a in {ak + b}
  long offset = 0;   // b
  bool verified_to_horizon = true;
};

enum class Certification { ETALE_CERTIFIED, HEURISTIC };

struct ResidueClassReport {
  long offset = 0;  // class l + r, indices n = offset + k*D
  std::string status;  // "progression", "roots", "constant-nonzero", "empty"
  long strassman_degree = -1;
  long shifted_bound = -1;
  long roots_found = 0;
  long candidates_checked = 0;
};

struct DmlSolution {
  std::vector<long> exact_hits;
  std::vector<Progression> progressions;
  std::optional<long> uniform_bound;  // absent <=> every composed series constant
  bool all_constant = false;
  Certification certification = Certification::HEURISTIC;
  std::vector<ResidueClassReport> residue_reports;
  std::vector<std::string> warnings;
  long prime = 5;
  long precision = 0;
  long horizon = 0;
  long preperiod = 0;      // l: indices below it are checked one by one
  long iterate_step = 1;   // D actually used (residue period, possibly doubled)
  std::optional<std::string> empty_reason;  // e.g. NON_INTEGRAL
};

struct ReturnSet {
  int chart_id = 1;  // 1: value in Z_p, 2: chart around infinity
  std::vector<long> members;
  long horizon = 0;
  mpq_class complement_density;  // sliding-window estimate, default window
  std::vector<long> indeterminate;  // excluded indices ([0:0])
};

struct DmlOptions {
  long horizon = 10000;
  long precision = 64;
  long mahler_coefficients = 24;
  long holdouts = 8;
  int max_period_doublings = 6;
  long max_candidates_per_root = 4096;
  IterationLimits limits;
};

// Substitutes the interpolating series into a polynomial observable,
// with tail-floor propagation through the truncated arithmetic.
PadicSeries compose_observable(const std::vector<PadicSeries>& series,
                               const Polynomial& g);

// N := 1 + max over non-constant members of the shifted Strassman index
// (the largest positive index attaining the positive-index minimum); nullopt
// when every series is constant at precision and the caller applies the
// constant dichotomy.
std::optional<long> uniform_fiber_bound(const std::vector<PadicSeries>& series);

// Per-system solver: residue period detection, per-class Mahler fits with
// adaptive period doubling until slope certification (or the doubling cap),
// then per-target Strassman analysis with exact verification of every
// candidate index. Fits are cached so target sweeps reuse them.
class DmlSolver {
public:
  DmlSolver(PolyMap map, RationalPoint x, long p, DmlOptions options = {});

  DmlSolution solve(const TargetSpec& target) const;

  long preperiod() const { return preperiod_; }
  long iterate_step() const { return step_; }
  bool etale_certified() const { return etale_; }
  bool fits_certified() const { return fits_certified_; }
  const std::vector<PadicSeries>& class_series(long r) const {
    return fits_.at(static_cast<size_t>(r)).phi;
  }

private:
  struct ClassFit {
    long offset = 0;  // l + r
    MahlerExpansion expansion;
    AnalyticityCertificate certificate;
    std::vector<PadicSeries> phi;
  };

  PolyMap map_;
  RationalPoint x_;
  long p_;
  DmlOptions options_;
  long preperiod_ = 0;
  long step_ = 1;
  bool etale_ = false;
  bool fits_certified_ = false;
  std::vector<ClassFit> fits_;

  void fit_classes();
  std::vector<Polynomial> target_equations(const TargetSpec& target) const;
  std::optional<long> bound_for(const TargetSpec& target) const;
};

DmlSolution solve_dml(const PolyMap& map, const RationalPoint& x,
                      const TargetSpec& target, long p,
                      const DmlOptions& options = {});

// Chart membership along the orbit for a P^1-valued observable: V1 where the
// denominator stays a unit after clearing common valuation, V2 otherwise
// (both-unit overlaps go to V1 so the charts partition the indices).
std::vector<ReturnSet> return_set(const PolyMap& map, const RationalPoint& x,
                                  const Polynomial& f_num,
                                  const Polynomial& f_den, long p, long horizon,
                                  const IterationLimits& limits = {});

// Max over length-`window` intervals inside [0, horizon] of the complement
// proportion.
mpq_class banach_density_gap(const ReturnSet& S, long window);

struct ReturnRateWitness {
  int chart_id = 1;
  std::vector<long> witnesses;  // M values with #{n in S : n <= kappa*M} >= M
};

ReturnRateWitness return_rate_witness(const std::vector<ReturnSet>& charts,
                                      long kappa);

struct FiberReport {
  bool non_integral = false;  // target has p in its reduced denominator
  long observed_count = 0;
  long strassman_bound = 0;
  double fitted_c3 = 0.0;  // count / log(M)
  std::vector<long> hits;
};

FiberReport fiber_report(const PadicSeries& H, const std::optional<mpq_class>& t,
                         const ReturnSet& S, long M);

}  // namespace padml

#endif
