#include "padml/problem.hpp"

#include <algorithm>
#include <sstream>

namespace padml {

using nlohmann::json;

mpq_class parse_rational_text(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) raise(ErrorCode::SyntaxError, "empty rational");
  try {
    mpq_class q(s);
    q.canonicalize();
    return q;
  } catch (const std::exception&) {
    raise(ErrorCode::SyntaxError, "bad rational '" + text + "'");
  }
}

std::string rational_to_text(const mpq_class& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

ProblemFile ProblemFile::from_json(const json& j) {
  if (!j.is_object()) raise(ErrorCode::SyntaxError, "problem must be an object");
  ProblemFile pf;
  try {
    pf.prime = j.at("prime").get<long>();
    pf.variables = j.at("variables").get<std::vector<std::string>>();
    pf.map_text = j.at("map").get<std::vector<std::string>>();
    pf.point_text = j.at("point").get<std::vector<std::string>>();
    if (j.contains("precision")) pf.precision = j.at("precision").get<long>();
    if (j.contains("observable"))
      pf.observable_text = j.at("observable").get<std::vector<std::string>>();
    if (j.contains("targets")) pf.targets = j.at("targets");
    if (j.contains("horizon")) pf.horizon = j.at("horizon").get<long>();
    if (j.contains("mahler_coefficients"))
      pf.mahler_coefficients = j.at("mahler_coefficients").get<long>();
    if (j.contains("holdout_count")) pf.holdouts = j.at("holdout_count").get<long>();
  } catch (const json::exception& e) {
    raise(ErrorCode::SyntaxError, std::string("problem file: ") + e.what());
  }
  if (pf.prime < 5) raise(ErrorCode::InvalidArgument, "prime must be >= 5");
  if (pf.precision < 1) raise(ErrorCode::InvalidArgument, "precision must be >= 1");
  if (pf.horizon < 0) raise(ErrorCode::InvalidArgument, "horizon must be >= 0");
  if (pf.map_text.size() != pf.variables.size())
    raise(ErrorCode::DimensionMismatch, "map component count vs variables");
  if (pf.point_text.size() != pf.variables.size())
    raise(ErrorCode::DimensionMismatch, "point dimension vs variables");
  if (pf.observable_text.size() > 2)
    raise(ErrorCode::InvalidArgument, "observable takes one or two polynomials");
  return pf;
}

json ProblemFile::to_json() const {
  json j;
  j["prime"] = prime;
  j["precision"] = precision;
  j["variables"] = variables;
  j["map"] = map_text;
  j["point"] = point_text;
  if (!observable_text.empty()) j["observable"] = observable_text;
  if (!targets.empty()) j["targets"] = targets;
  j["horizon"] = horizon;
  j["mahler_coefficients"] = mahler_coefficients;
  j["holdout_count"] = holdouts;
  return j;
}

PolyMap ProblemFile::parsed_map() const { return parse_map(map_text, variables); }

RationalPoint ProblemFile::parsed_point() const {
  RationalPoint pt;
  for (const auto& s : point_text) pt.push_back(parse_rational_text(s));
  return pt;
}

Polynomial ProblemFile::observable_numerator() const {
  if (observable_text.empty())
    return Polynomial::variable(0, variables);
  return Polynomial::parse(observable_text[0], variables);
}

Polynomial ProblemFile::observable_denominator() const {
  if (observable_text.size() < 2)
    return Polynomial::constant(1, variables);
  return Polynomial::parse(observable_text[1], variables);
}

std::vector<TargetSpec> ProblemFile::parsed_targets() const {
  std::vector<TargetSpec> out;
  for (const auto& t : targets) {
    if (!t.is_object()) raise(ErrorCode::SyntaxError, "target must be an object");
    std::string type = t.value("type", "point");
    if (type == "point") {
      std::vector<mpq_class> values;
      for (const auto& v : t.at("values"))
        values.push_back(parse_rational_text(v.get<std::string>()));
      if (t.contains("observables")) {
        std::vector<Polynomial> obs;
        for (const auto& s : t.at("observables"))
          obs.push_back(Polynomial::parse(s.get<std::string>(), variables));
        out.push_back(TargetSpec::point(std::move(obs), std::move(values)));
      } else {
        out.push_back(TargetSpec::point(std::move(values)));
      }
    } else if (type == "vanishing") {
      std::vector<Polynomial> eqs;
      for (const auto& s : t.at("equations"))
        eqs.push_back(Polynomial::parse(s.get<std::string>(), variables));
      out.push_back(TargetSpec::vanishing(std::move(eqs)));
    } else {
      raise(ErrorCode::SyntaxError, "unknown target type '" + type + "'");
    }
  }
  return out;
}

DmlOptions ProblemFile::dml_options() const {
  DmlOptions o;
  o.horizon = horizon;
  o.precision = precision;
  o.mahler_coefficients = mahler_coefficients;
  o.holdouts = holdouts;
  return o;
}

std::string fnv1a_digest(const std::string& bytes) {
  unsigned long long h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream os;
  os << std::hex << h;
  return "fnv1a:" + os.str();
}

json ReportEnvelope::to_json() const {
  json j;
  j["tool"] = "padml";
#ifdef PADML_VERSION
  j["version"] = PADML_VERSION;
#else
  j["version"] = "0.0.0";
#endif
  j["command"] = command;
  j["input_digest"] = input_digest;
  j["parameters"] = parameters;
  j["payload"] = payload;
  j["warnings"] = warnings;
  return j;
}

std::string ReportEnvelope::serialize() const { return to_json().dump(2) + "\n"; }

json solution_to_json(const DmlSolution& s) {
  json j;
  j["exact_hits"] = s.exact_hits;
  json progs = json::array();
  for (const auto& p : s.progressions)
    progs.push_back({{"modulus", p.modulus},
                     {"offset", p.offset},
                     {"verified_to_horizon", p.verified_to_horizon}});
  j["progressions"] = progs;
  if (s.uniform_bound)
    j["uniform_bound"] = *s.uniform_bound;
  else
    j["uniform_bound"] = nullptr;
  j["all_constant"] = s.all_constant;
  j["certification"] = s.certification == Certification::ETALE_CERTIFIED
                           ? "ETALE_CERTIFIED"
                           : "HEURISTIC";
  j["prime"] = s.prime;
  j["precision"] = s.precision;
  j["horizon"] = s.horizon;
  j["preperiod"] = s.preperiod;
  j["iterate_step"] = s.iterate_step;
  if (s.empty_reason) j["empty_reason"] = *s.empty_reason;
  json reports = json::array();
  for (const auto& r : s.residue_reports) {
    json rr;
    rr["offset"] = r.offset;
    rr["status"] = r.status;
    if (r.strassman_degree >= 0) rr["strassman_degree"] = r.strassman_degree;
    if (r.shifted_bound >= 0) rr["shifted_bound"] = r.shifted_bound;
    rr["roots_found"] = r.roots_found;
    rr["candidates_checked"] = r.candidates_checked;
    reports.push_back(rr);
  }
  j["residue_reports"] = reports;
  j["warnings"] = s.warnings;
  return j;
}

json gap_report_to_json(const GapReport& r, bool include_records) {
  json j;
  j["n_max"] = r.n_max;
  j["classification"] = r.classification == GapClassification::FINITE_IMAGE_SUSPECTED
                            ? "FINITE_IMAGE_SUSPECTED"
                            : "POSITIVE_LIMSUP_WITNESSED";
  j["running_max_ratio"] = r.running_max_ratio;
  j["running_min_ratio_tail"] = r.running_min_ratio_tail;
  j["distinct_values"] = r.distinct_values;
  j["last_new_value_index"] = r.last_new_value_index;
  if (include_records) {
    json recs = json::array();
    for (const auto& rec : r.records) {
      json x;
      x["n"] = rec.n;
      x["defined"] = rec.defined;
      if (rec.defined) {
        x["height"] = rec.height.value;
        x["num"] = rec.height.num.get_str();
        x["den"] = rec.height.den.get_str();
        if (rec.has_ratio) x["ratio"] = rec.ratio;
        x["running_max"] = rec.running_max;
      }
      recs.push_back(x);
    }
    j["records"] = recs;
  }
  return j;
}

json return_set_to_json(const ReturnSet& s) {
  json j;
  j["chart"] = s.chart_id;
  j["horizon"] = s.horizon;
  j["members"] = s.members;
  j["indeterminate"] = s.indeterminate;
  j["complement_density"] = rational_to_text(s.complement_density);
  return j;
}

// ---------------------------------------------------------------------------
// Command dispatch.
// ---------------------------------------------------------------------------

namespace {

json certificate_to_json(const AnalyticityCertificate& cert) {
  json j;
  j["verdict"] = cert.certified() ? "CERTIFIED_CANDIDATE" : "INCONCLUSIVE";
  j["slope_infinite"] = cert.slope_infinite;
  if (!cert.slope_infinite) {
    j["slope"] = rational_to_text(cert.slope);
    j["intercept"] = rational_to_text(cert.intercept);
  }
  json hold = json::array();
  for (const auto& h : cert.holdout_report) {
    hold.push_back({{"n", h.n},
                    {"observed_valuation", h.observed.infinite
                                               ? json(nullptr)
                                               : json(h.observed.value)},
                    {"threshold", h.threshold},
                    {"pass", h.pass}});
  }
  j["holdout_report"] = hold;
  return j;
}

json point_to_json(const RationalPoint& pt) {
  json j = json::array();
  for (const auto& q : pt) j.push_back(rational_to_text(q));
  return j;
}

long option_long(const json& options, const std::string& key, long fallback) {
  if (options.contains(key)) return options.at(key).get<long>();
  return fallback;
}

json cmd_orbit(const ProblemFile& pf, const json& options) {
  PolyMap map = pf.parsed_map();
  RationalPoint x = pf.parsed_point();
  long n_max = option_long(options, "n_max", std::min<long>(pf.horizon, 100));
  auto pts = orbit(map, x, n_max);
  json out;
  out["n_max"] = n_max;
  json arr = json::array();
  for (const auto& pt : pts) arr.push_back(point_to_json(pt));
  out["points"] = arr;
  return out;
}

json cmd_period(const ProblemFile& pf) {
  PolyMap map = pf.parsed_map();
  RationalPoint x = pf.parsed_point();
  if (!good_reduction_check(map, x, pf.prime))
    raise(ErrorCode::NotPIntegral, "map or point not p-integral at this prime");
  ResiduePeriod rp = residue_period(map, x, pf.prime);
  json out;
  out["preperiod"] = rp.preperiod;
  out["period"] = rp.period;
  out["good_reduction"] = true;
  out["etale_certified"] = jacobian_unit_check(map);
  return out;
}

json cmd_mahler_fit(const ProblemFile& pf) {
  PolyMap map = pf.parsed_map();
  RationalPoint x = pf.parsed_point();
  ResiduePeriod rp = residue_period(map, x, pf.prime);
  RationalPoint start = iterate(map, x, rp.preperiod);
  MahlerExpansion exp = mahler_fit(map, start, pf.prime, rp.period,
                                   pf.mahler_coefficients, pf.precision);
  AnalyticityCertificate cert = slope_certificate(exp);
  json out;
  out["preperiod"] = rp.preperiod;
  out["period"] = rp.period;
  out["fit_points"] = exp.fit_points;
  json decay = json::array();
  for (size_t k = 0; k < exp.decay.size(); ++k)
    decay.push_back({{"k", k},
                     {"valuation", exp.decay[k].infinite ? json(nullptr)
                                                         : json(exp.decay[k].value)}});
  out["decay"] = decay;
  if (cert.certified()) {
    auto series = to_power_series(exp, cert);
    std::vector<long> holdout;
    for (long h = 1; h <= pf.holdouts; ++h) holdout.push_back(exp.fit_points + h);
    cert = approximant_check(series, map, start, rp.period, holdout, cert);
    out["reported_precision"] = series[0].precision();
    out["tail_floor"] = series[0].tail_floor();
  }
  out["certificate"] = certificate_to_json(cert);
  return out;
}

json weierstrass_to_json(const PadicSeries& H) {
  json out;
  try {
    WeierstrassFactorization wf = weierstrass_prep(H);
    out["gauss_valuation"] = wf.gauss_valuation;
    out["degree"] = static_cast<long>(wf.poly_part.size()) - 1;
    out["output_precision"] = wf.output_precision;
    json poly = json::array();
    for (const auto& c : wf.poly_part) poly.push_back(c.residue().get_str());
    out["poly_part"] = poly;
    out["unit_constant_valuation"] =
        wf.unit_part.coefficient_valuation(0).infinite
            ? json(nullptr)
            : json(wf.unit_part.coefficient_valuation(0).value);
  } catch (const Error& e) {
    out["error"] = e.what();
  }
  return out;
}

json cmd_series_diag(const ProblemFile& pf) {
  PolyMap map = pf.parsed_map();
  RationalPoint x = pf.parsed_point();
  DmlSolver solver(map, x, pf.prime, pf.dml_options());
  Polynomial f = pf.observable_numerator();

  json out;
  out["preperiod"] = solver.preperiod();
  out["iterate_step"] = solver.iterate_step();
  out["etale_certified"] = solver.etale_certified();
  out["fits_certified"] = solver.fits_certified();
  json classes = json::array();
  for (long r = 0; r < solver.iterate_step(); ++r) {
    json c;
    c["offset"] = solver.preperiod() + r;
    if (!solver.fits_certified()) {
      classes.push_back(c);
      continue;
    }
    PadicSeries H = compose_observable(solver.class_series(r), f);
    c["is_constant"] = H.is_constant_at_precision();
    c["precision"] = H.precision();
    c["tail_floor"] = H.tail_floor();
    if (!H.is_constant_at_precision()) {
      c["gauss_valuation"] = gauss_valuation(H).value;
      c["strassman_degree"] = strassman_degree(H);
      c["shifted_index"] = shifted_strassman_index(H);
      RootList roots = zeros_in_Zp(H);
      c["strassman_bound"] = roots.strassman_bound;
      json rj = json::array();
      for (const auto& root : roots.roots)
        rj.push_back({{"residue", root.approximation.residue().get_str()},
                      {"precision", root.approximation.precision()},
                      {"certified_simple", root.certified_simple}});
      c["roots"] = rj;
      c["weierstrass"] = weierstrass_to_json(H);
    }
    classes.push_back(c);
  }
  out["classes"] = classes;
  return out;
}

json cmd_dml_solve(const ProblemFile& pf, std::vector<std::string>* warnings) {
  PolyMap map = pf.parsed_map();
  RationalPoint x = pf.parsed_point();
  auto targets = pf.parsed_targets();
  if (targets.empty())
    raise(ErrorCode::InvalidArgument, "dml-solve needs at least one target");
  DmlSolver solver(map, x, pf.prime, pf.dml_options());
  json out;
  out["preperiod"] = solver.preperiod();
  out["iterate_step"] = solver.iterate_step();
  json sols = json::array();
  for (size_t i = 0; i < targets.size(); ++i) {
    DmlSolution s = solver.solve(targets[i]);
    json sj = solution_to_json(s);
    sj["target"] = pf.targets.at(i);
    for (const auto& w : s.warnings)
      if (std::find(warnings->begin(), warnings->end(), w) == warnings->end())
        warnings->push_back(w);
    sols.push_back(sj);
  }
  out["solutions"] = sols;
  return out;
}

json cmd_return_set(const ProblemFile& pf) {
  PolyMap map = pf.parsed_map();
  RationalPoint x = pf.parsed_point();
  auto charts = return_set(map, x, pf.observable_numerator(),
                           pf.observable_denominator(), pf.prime, pf.horizon);
  json out;
  json cj = json::array();
  for (const auto& c : charts) cj.push_back(return_set_to_json(c));
  out["charts"] = cj;
  try {
    ReturnRateWitness w = return_rate_witness(charts, static_cast<long>(charts.size()));
    out["witness"] = {{"chart", w.chart_id}, {"witnesses", w.witnesses}};
  } catch (const Error& e) {
    if (e.code() != ErrorCode::HorizonTooSmall) throw;
    out["witness"] = nullptr;
  }
  return out;
}

json cmd_gap_ratio(const ProblemFile& pf, const json& options) {
  PolyMap map = pf.parsed_map();
  RationalPoint x = pf.parsed_point();
  long n_max = option_long(options, "n_max", pf.horizon);
  GapReport report = gap_ratio_series(map, x, pf.observable_numerator(),
                                      pf.observable_denominator(), n_max);
  bool include_records = true;
  if (options.contains("include_records"))
    include_records = options.at("include_records").get<bool>();
  json out = gap_report_to_json(report, include_records);
  // embedding constant for the rational field; diagnostic only
  out["constants"] = {{"c5", 0.5}};
  try {
    TailSummary tail = limsup_liminf_summary(report);
    out["tail_summary"] = {{"max_tail_ratio", tail.max_tail_ratio},
                           {"min_tail_ratio", tail.min_tail_ratio},
                           {"divergence_flag", tail.divergence_flag}};
  } catch (const Error& e) {
    if (e.code() != ErrorCode::InsufficientData) throw;
    out["tail_summary"] = nullptr;
  }
  return out;
}

}  // namespace

std::string run_command(const std::string& command,
                        const std::optional<std::string>& problem_json,
                        const std::optional<std::string>& options_json) {
  json options = json::object();
  if (options_json && !options_json->empty()) {
    try {
      options = json::parse(*options_json);
    } catch (const json::exception& e) {
      raise(ErrorCode::SyntaxError, std::string("options: ") + e.what());
    }
  }

  ReportEnvelope env;
  env.command = command;
  env.input_digest = fnv1a_digest(problem_json.value_or(""));

  if (command == "count-heights") {
    long n = option_long(options, "n", -1);
    if (n < 1) raise(ErrorCode::InvalidArgument, "count-heights needs n >= 1");
    env.parameters = {{"n", n}};
    env.payload = {{"n", n}, {"count", count_height_le(n)}};
    return env.serialize();
  }

  if (!problem_json)
    raise(ErrorCode::InvalidArgument, command + " needs a problem file");
  json pj;
  try {
    pj = json::parse(*problem_json);
  } catch (const json::exception& e) {
    raise(ErrorCode::SyntaxError, std::string("problem file: ") + e.what());
  }
  ProblemFile pf = ProblemFile::from_json(pj);
  pf.prime = option_long(options, "prime", pf.prime);
  pf.precision = option_long(options, "precision", pf.precision);
  pf.horizon = option_long(options, "horizon", pf.horizon);

  env.parameters = {{"prime", pf.prime},
                    {"precision", pf.precision},
                    {"horizon", pf.horizon},
                    {"mahler_coefficients", pf.mahler_coefficients},
                    {"holdout_count", pf.holdouts}};

  if (command == "orbit") {
    env.payload = cmd_orbit(pf, options);
  } else if (command == "period") {
    env.payload = cmd_period(pf);
  } else if (command == "mahler-fit") {
    env.payload = cmd_mahler_fit(pf);
  } else if (command == "series-diag") {
    env.payload = cmd_series_diag(pf);
    if (!env.payload.value("etale_certified", true))
      env.warnings.push_back("heuristic: etale not certified");
  } else if (command == "dml-solve") {
    env.payload = cmd_dml_solve(pf, &env.warnings);
  } else if (command == "return-set") {
    env.payload = cmd_return_set(pf);
  } else if (command == "gap-ratio") {
    env.payload = cmd_gap_ratio(pf, options);
  } else {
    raise(ErrorCode::InvalidArgument, "unknown command '" + command + "'");
  }
  return env.serialize();
}

}  // namespace padml
