#include "epsconvex/cli.hpp"

#include "epsconvex/criterion.hpp"
#include "epsconvex/smoothing.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace epsconvex {

using Json = nlohmann::ordered_json;

SpecError::SpecError(const std::string& source, const std::string& w, const std::string& what)
    : Error(source + ":" + w + ": " + what), where(w) {}

namespace {

class SpecReader {
 public:
  explicit SpecReader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const std::string& ptr, const std::string& msg) const {
    throw SpecError(source_, ptr.empty() ? "/" : ptr, msg);
  }

  double number(const Json& j, const std::string& key, const std::string& ptr) const {
    if (!j.contains(key)) fail(ptr, "missing field \"" + key + "\"");
    const Json& v = j.at(key);
    if (!v.is_number()) fail(ptr + "/" + key, "expected a number");
    return v.get<double>();
  }

  Vec vector(const Json& j, const std::string& key, int m, const std::string& ptr) const {
    if (!j.contains(key)) fail(ptr, "missing field \"" + key + "\"");
    const Json& v = j.at(key);
    const std::string here = ptr + "/" + key;
    if (!v.is_array() || static_cast<int>(v.size()) != m)
      fail(here, "expected an array of " + std::to_string(m) + " numbers");
    Vec out(m);
    for (int i = 0; i < m; ++i) {
      if (!v[i].is_number()) fail(here + "/" + std::to_string(i), "expected a number");
      out[i] = v[i].get<double>();
    }
    return out;
  }

  SpaceParams space(const Json& j, const std::string& ptr,
                    const std::optional<SpaceParams>& parent) const {
    if (!j.contains("space")) {
      if (parent) return *parent;
      fail(ptr, "missing field \"space\"");
    }
    const Json& s = j.at("space");
    const std::string here = ptr + "/space";
    if (!s.is_object()) fail(here, "expected an object {\"m\": int, \"a\": real}");
    if (!s.contains("m") || !s.at("m").is_number_integer()) fail(here + "/m", "expected an integer");
    const int m = s.at("m").get<int>();
    if (m < 2 || m > 8) fail(here + "/m", "dimension must lie in [2, 8]");
    const double a = number(s, "a", here);
    if (!(a > 0.0)) fail(here + "/a", "curvature scale must be positive");
    return SpaceParams{m, a};
  }

  TangentVector direction(const HyperbolicSpace& sp, const Point& at, const Json& j,
                          const std::string& key, const std::string& ptr) const {
    const Vec c = vector(j, key, sp.dim(), ptr);
    if (!(c.norm() > 0.0)) fail(ptr + "/" + key, "direction must be nonzero");
    const auto frame = sp.tangent_frame(at);
    TangentVector v = sp.zero_tangent(at);
    for (int i = 0; i < sp.dim(); ++i) v.vec += c[i] * frame[i].vec;
    return sp.unit(v);
  }

  Point point(const HyperbolicSpace& sp, const Json& j, const std::string& key,
              const std::string& ptr) const {
    if (!j.contains(key)) return sp.origin();
    return sp.point_from_spatial(vector(j, key, sp.dim(), ptr));
  }

  double positive(const Json& j, const std::string& key, const std::string& ptr) const {
    const double v = number(j, key, ptr);
    if (!(v > 0.0)) fail(ptr + "/" + key, "expected a positive number");
    return v;
  }

  ConvexBody body(const Json& j, const std::string& ptr,
                  const std::optional<SpaceParams>& parent) const {
    if (!j.is_object()) fail(ptr, "expected a body object");
    if (!j.contains("shape") || !j.at("shape").is_string())
      fail(ptr + "/shape", "expected a shape name");
    const std::string shape = j.at("shape").get<std::string>();
    const SpaceParams params = space(j, ptr, parent);
    const HyperbolicSpace sp(params);
    try {
      if (shape == "ball") {
        const double r = number(j, "radius", ptr);
        if (r < 0.0) fail(ptr + "/radius", "radius must be nonnegative");
        return ConvexBody::ball(sp, point(sp, j, "center", ptr), r);
      }
      if (shape == "horoball")
        return ConvexBody::horoball(sp, vector(j, "direction", sp.dim(), ptr),
                                    j.contains("level") ? number(j, "level", ptr) : 1.0);
      if (shape == "geodesic_tube") {
        const Point p = point(sp, j, "point", ptr);
        return ConvexBody::geodesic_tube(sp, direction(sp, p, j, "direction", ptr),
                                         positive(j, "radius", ptr));
      }
      if (shape == "hyperplane_tube") {
        const Point p = point(sp, j, "point", ptr);
        return ConvexBody::hyperplane_tube(sp, direction(sp, p, j, "normal", ptr),
                                           positive(j, "radius", ptr));
      }
      if (shape == "half_space") {
        const Point p = point(sp, j, "point", ptr);
        return ConvexBody::half_space(sp, direction(sp, p, j, "normal", ptr),
                                      j.contains("offset") ? number(j, "offset", ptr) : 0.0);
      }
      if (shape == "intersection") {
        if (!j.contains("parts") || !j.at("parts").is_array() || j.at("parts").empty())
          fail(ptr + "/parts", "expected a nonempty array of bodies");
        std::vector<ConvexBody> parts;
        const Json& ps = j.at("parts");
        for (std::size_t i = 0; i < ps.size(); ++i) {
          ConvexBody part = body(ps[i], ptr + "/parts/" + std::to_string(i), params);
          if (part.space().dim() != params.m || part.space().a() != params.a)
            fail(ptr + "/parts/" + std::to_string(i), "part lives in a different space");
          parts.push_back(std::move(part));
        }
        return ConvexBody::intersection(std::move(parts));
      }
    } catch (const SpecError&) {
      throw;
    } catch (const Error& e) {
      fail(ptr, e.what());
    }
    fail(ptr + "/shape", "unknown shape \"" + shape + "\"");
  }

 private:
  std::string source_;
};

std::string line_col(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return std::to_string(line) + ":" + std::to_string(col);
}

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v == 0.0 ? 0.0 : v);
  return buf;
}

Json jnum(double v) {
  if (std::isfinite(v)) return v == 0.0 ? 0.0 : v;
  return num(v);
}

Json spatial(const Point& p) {
  Json out = Json::array();
  for (Eigen::Index i = 1; i < p.coords.size(); ++i) out.push_back(p.coords[i]);
  return out;
}

// A deterministic boundary point: first exit along the frame axes from the interior anchor.
Point anchor_boundary_point(const ConvexBody& body) {
  const auto& sp = body.space();
  const Point anchor = interior_point(body);
  for (const auto& e : sp.tangent_frame(anchor))
    for (double sign : {1.0, -1.0})
      if (auto q = ray_exit(body, anchor, sp.scaled(e, sign), 50.0 / sp.a())) return *q;
  throw Error("body has no boundary point within reach of its interior anchor");
}

const ConvexBody& need_body(const std::optional<ConvexBody>& body) {
  if (!body) throw Error("this command needs --body");
  return *body;
}

double need_eps(const RunConfig& c) {
  if (!c.eps) throw Error("this command needs --eps");
  if (!(*c.eps > 0.0)) throw Error("--eps must be positive");
  return *c.eps;
}

Json verdict_json(const CriterionVerdict& v) {
  Json j;
  j["kind"] = verdict_name(v.kind);
  j["passed"] = v.passed;
  j["margin"] = jnum(v.margin);
  j["inconclusive"] = v.inconclusive;
  j["tolerance"] = v.tolerance;
  j["bound_low"] = jnum(v.bound_low);
  j["bound_high"] = jnum(v.bound_high);
  j["ii_low"] = jnum(v.ii_low);
  j["ii_high"] = jnum(v.ii_high);
  j["strictly_convex"] = v.strictly_convex;
  j["corners"] = v.corners;
  j["note"] = v.note;
  return j;
}

struct Table {
  std::vector<std::vector<std::string>> rows;
  void add(const std::string& q, double value, double lo, double hi, bool pass) {
    rows.push_back({q, num(value), num(lo), num(hi), pass ? "true" : "false"});
  }
  void write(std::ostream& out) const {
    out << "quantity,value,bound_low,bound_high,pass\n";
    for (const auto& r : rows) out << r[0] << ',' << r[1] << ',' << r[2] << ',' << r[3] << ',' << r[4] << '\n';
  }
};

void verdict_rows(Table& t, const CriterionVerdict& v) {
  const std::string k = verdict_name(v.kind);
  t.add(k + ".ii_low", v.ii_low, v.bound_low, v.bound_high, v.passed);
  t.add(k + ".ii_high", v.ii_high, v.bound_low, v.bound_high, v.passed);
  t.add(k + ".margin", v.margin, -v.tolerance, INFINITY, v.passed);
}

int run_riccati(const RunConfig& c, OutputFormat fmt, std::ostream& out) {
  const double eps = need_eps(c);
  if (c.rank < 1 || c.rank > 8) throw Error("--rank must lie in [1, 8]");
  const PinchBounds bounds = PinchBounds::make(c.a, c.b);
  std::mt19937_64 rng(c.seed);
  const CurvatureFn curvature =
      c.a == c.b ? constant_curvature(c.rank, c.a)
                 : PiecewiseCurvature::random(c.rank, bounds, eps, rng).as_function();
  const SymOperator a0 =
      SymOperator::diagonal(Vec::Constant(c.rank, scalar_coth_barrier(c.a, eps, 0.0)));
  ComparisonOptions opt;
  for (int k = 0; k <= c.steps; ++k)
    opt.riccati.output_times.push_back(eps * (1.0 - opt.margin_fraction) * k / c.steps);
  const PositivityReport rep = forward_positivity_check(a0, curvature, bounds, eps, opt);
  const bool ok = rep.positive && rep.upper_barrier_excess <= c.tolerance &&
                  rep.lower_barrier_excess <= c.tolerance;

  const auto& tr = rep.trajectory;
  if (fmt == OutputFormat::csv) {
    out << "t,lambda_minus,lambda_plus,upper_barrier,lower_barrier\n";
    for (std::size_t i = 0; i < tr.output_index.size(); ++i) {
      const double t = opt.riccati.output_times[i];
      const auto [lo, hi] = eigen_extremes(tr.states[tr.output_index[i]]);
      out << num(t) << ',' << num(lo) << ',' << num(hi) << ','
          << num(scalar_coth_barrier(c.a, eps, t)) << ',' << num(scalar_tanh_barrier(c.b, eps, t))
          << '\n';
    }
  } else {
    Json j;
    j["command"] = "riccati";
    j["a"] = c.a;
    j["b"] = c.b;
    j["eps"] = eps;
    j["rank"] = c.rank;
    j["seed"] = c.seed;
    j["stayed_finite"] = rep.stayed_finite;
    j["positive"] = rep.positive;
    j["min_lambda_minus"] = rep.min_lambda_minus;
    j["min_lambda_minus_time"] = rep.min_lambda_minus_time;
    j["upper_barrier_excess"] = rep.upper_barrier_excess;
    j["lower_barrier_excess"] = rep.lower_barrier_excess;
    j["tolerance"] = c.tolerance;
    j["passed"] = ok;
    Json samples = Json::array();
    for (std::size_t i = 0; i < tr.output_index.size(); ++i) {
      const double t = opt.riccati.output_times[i];
      const auto [lo, hi] = eigen_extremes(tr.states[tr.output_index[i]]);
      samples.push_back({{"t", t},
                         {"lambda_minus", lo},
                         {"lambda_plus", hi},
                         {"upper_barrier", scalar_coth_barrier(c.a, eps, t)},
                         {"lower_barrier", scalar_tanh_barrier(c.b, eps, t)}});
    }
    j["samples"] = samples;
    out << j.dump(2) << '\n';
  }
  return ok ? 0 : 2;
}

int run_check(const RunConfig& c, const ConvexBody& body, OutputFormat fmt, std::ostream& out) {
  const double eps = need_eps(c);
  const PinchBounds bounds = PinchBounds::make(c.a, c.b);
  CheckOptions opt;
  opt.tolerance = c.tolerance;
  std::vector<CriterionVerdict> verdicts{check_necessary(body, eps, bounds, opt),
                                         check_sufficient(body, eps, bounds, opt)};
  if (c.a == c.b) verdicts.push_back(check_iff_constant_curvature(body, eps, c.a, opt));
  const bool ok = verdicts.back().kind == VerdictKind::iff_constant_curvature
                      ? verdicts.back().passed
                      : verdicts.front().passed;
  if (fmt == OutputFormat::csv) {
    Table t;
    for (const auto& v : verdicts) verdict_rows(t, v);
    t.write(out);
  } else {
    Json j;
    j["command"] = "check";
    j["eps"] = eps;
    j["a"] = c.a;
    j["b"] = c.b;
    Json vs = Json::array();
    for (const auto& v : verdicts) vs.push_back(verdict_json(v));
    j["verdicts"] = vs;
    j["status"] = ok ? "PASS" : "FAIL";
    out << j.dump(2) << '\n';
  }
  return ok ? 0 : 2;
}

int run_profile(const RunConfig& c, const ConvexBody& body, OutputFormat fmt, std::ostream& out) {
  const double eps = need_eps(c);
  const Point x = anchor_boundary_point(body);
  const CurvatureProfile prof = flow_curvature_profile(body, x, eps, c.steps);
  if (fmt == OutputFormat::csv) {
    out << "t,lambda_minus,lambda_plus\n";
    for (std::size_t i = 0; i < prof.times.size(); ++i)
      out << num(prof.times[i]) << ',' << num(prof.lambda_minus[i]) << ','
          << num(prof.lambda_plus[i]) << '\n';
  } else {
    Json j;
    j["command"] = "profile";
    j["eps"] = eps;
    j["steps"] = c.steps;
    j["point"] = spatial(x);
    j["blow_up"] = prof.blow_up;
    j["blow_up_time"] = prof.focal_time ? Json(*prof.focal_time) : Json(nullptr);
    Json rows = Json::array();
    for (std::size_t i = 0; i < prof.times.size(); ++i)
      rows.push_back({{"t", prof.times[i]},
                      {"lambda_minus", prof.lambda_minus[i]},
                      {"lambda_plus", prof.lambda_plus[i]}});
    j["rows"] = rows;
    out << j.dump(2) << '\n';
  }
  return 0;
}

int run_focal(const RunConfig& c, const ConvexBody& body, OutputFormat fmt, std::ostream& out) {
  const double t_max = c.eps ? need_eps(c) : 20.0 / body.space().a();
  const Point x = anchor_boundary_point(body);
  const auto ft = focal_time(body, x, t_max, c.steps);
  if (fmt == OutputFormat::csv) {
    out << "focal_time\n" << (ft ? num(*ft) : "none") << '\n';
  } else {
    Json j;
    j["command"] = "focal";
    j["t_max"] = t_max;
    j["point"] = spatial(x);
    j["focal_time"] = ft ? Json(*ft) : Json("none");
    out << j.dump(2) << '\n';
  }
  return 0;
}

int run_roundtrip(const RunConfig& c, const ConvexBody& body, OutputFormat fmt, std::ostream& out) {
  const double eps = need_eps(c);
  CheckOptions opt;
  opt.tolerance = c.tolerance;
  const RoundTripReport rep = erode_dilate_check(body, eps, c.probes, c.seed, opt);
  if (fmt == OutputFormat::csv) {
    Table t;
    t.add("defect", rep.defect, 0.0, 2.0 * rep.spacing, rep.set_equal);
    t.add("core_violation", rep.core_violation, -INFINITY, 1e-8, rep.core_convex);
    verdict_rows(t, rep.iff);
    t.write(out);
  } else {
    Json j;
    j["command"] = "roundtrip";
    j["eps"] = eps;
    j["probes"] = rep.probes;
    j["seed"] = c.seed;
    j["defect"] = rep.defect;
    j["spacing"] = rep.spacing;
    j["set_equal"] = rep.set_equal;
    j["core_convex"] = rep.core_convex;
    j["core_violation"] = rep.core_violation;
    j["iff"] = verdict_json(rep.iff);
    j["passed"] = rep.passed;
    out << j.dump(2) << '\n';
  }
  return rep.passed ? 0 : 2;
}

int run_smooth(const RunConfig& c, const ConvexBody& body, OutputFormat fmt, std::ostream& out) {
  const auto cf = closed_form_ii(body);
  if ((!c.alpha || !c.beta) && !cf)
    throw Error("--alpha and --beta are needed for bodies without a closed-form II");
  const double alpha = c.alpha ? *c.alpha : cf->first;
  const double beta = c.beta ? *c.beta : cf->second;
  const double alpha_p = c.alpha_p ? *c.alpha_p : 0.9 * alpha;
  const double beta_p = c.beta_p ? *c.beta_p : 1.1 * beta;
  LevelSetOptions opt;
  opt.kappa = c.kappa;
  opt.seed = c.seed;
  const LevelSetReport rep = smoothed_levelset_check(body, alpha, beta, c.eta, alpha_p, beta_p, opt);
  if (fmt == OutputFormat::csv) {
    Table t;
    t.add("curvature_low", rep.curvature_low, rep.bound_low, rep.bound_high, rep.curvature_ok);
    t.add("curvature_high", rep.curvature_high, rep.bound_low, rep.bound_high, rep.curvature_ok);
    t.add("inclusion_failures", rep.inclusion_failures, 0.0, 0.0, rep.inclusion_ok);
    t.add("min_gradient", rep.min_gradient, 0.5, INFINITY, rep.min_gradient >= 0.5);
    t.write(out);
  } else {
    Json j;
    j["command"] = "smooth";
    j["alpha"] = alpha;
    j["beta"] = beta;
    j["alpha_p"] = alpha_p;
    j["beta_p"] = beta_p;
    j["eta"] = rep.eta;
    j["eta_prime"] = rep.eta_prime;
    j["kappa"] = rep.kappa;
    j["level"] = rep.level;
    j["level_shifts"] = rep.level_shifts;
    j["inclusion_probes"] = rep.inclusion_probes;
    j["inclusion_failures"] = rep.inclusion_failures;
    j["inclusion_ok"] = rep.inclusion_ok;
    j["min_gradient"] = rep.min_gradient;
    j["curvature_low"] = rep.curvature_low;
    j["curvature_high"] = rep.curvature_high;
    j["bound_low"] = rep.bound_low;
    j["bound_high"] = rep.bound_high;
    j["curvature_ok"] = rep.curvature_ok;
    j["passed"] = rep.passed;
    out << j.dump(2) << '\n';
  }
  return rep.passed ? 0 : 2;
}

}  // namespace

ConvexBody parse_body_spec(const std::string& text, const std::string& source) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::string msg = e.what();
    if (const auto pos = msg.find("syntax error"); pos != std::string::npos) msg = msg.substr(pos);
    throw SpecError(source, line_col(text, e.byte), msg);
  }
  return SpecReader(source).body(doc, "", std::nullopt);
}

ConvexBody load_body_spec(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open body spec " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_body_spec(ss.str(), path);
}

Command parse_command(const std::string& name) {
  for (Command c : {Command::riccati, Command::check, Command::profile, Command::focal,
                    Command::roundtrip, Command::smooth})
    if (name == command_name(c)) return c;
  throw Error("unknown command " + name);
}

const char* command_name(Command c) {
  switch (c) {
    case Command::riccati: return "riccati";
    case Command::check: return "check";
    case Command::profile: return "profile";
    case Command::focal: return "focal";
    case Command::roundtrip: return "roundtrip";
    case Command::smooth: return "smooth";
  }
  return "?";
}

int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  try {
    if (!(c.a > 0.0) || !(c.b > 0.0)) throw Error("--a and --b must be positive");
    if (c.a > c.b) throw Error("need a <= b");
    if (!(c.tolerance > 0.0)) throw Error("--tolerance must be positive");
    if (c.steps < 1) throw Error("--steps must be positive");
    const OutputFormat fmt = c.output_format.value_or(
        c.command == Command::profile ? OutputFormat::csv : OutputFormat::json);
    std::optional<ConvexBody> body;
    if (c.body_spec_path) body.emplace(load_body_spec(*c.body_spec_path));
    std::ostringstream report;
    int status = 0;
    switch (c.command) {
      case Command::riccati: status = run_riccati(c, fmt, report); break;
      case Command::check: status = run_check(c, need_body(body), fmt, report); break;
      case Command::profile: status = run_profile(c, need_body(body), fmt, report); break;
      case Command::focal: status = run_focal(c, need_body(body), fmt, report); break;
      case Command::roundtrip: status = run_roundtrip(c, need_body(body), fmt, report); break;
      case Command::smooth: status = run_smooth(c, need_body(body), fmt, report); break;
    }
    out << report.str();
    return status;
  } catch (const SpecError& e) {
    err << "error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    err << "error: " << command_name(c.command) << ": " << e.what() << '\n';
  }
  return 1;
}

}  // namespace epsconvex
