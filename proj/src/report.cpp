#include "harmomorph/report.hpp"

#include "harmomorph/parallel.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace harmomorph {

using nlohmann::json;

namespace {

std::string join_issues(const std::vector<ConfigIssue>& issues) {
  std::string out = "ConfigError:";
  for (const auto& i : issues) {
    out += "\n  ";
    if (i.line > 0) out += "line " + std::to_string(i.line) + ": ";
    out += i.reason;
  }
  return out;
}

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex(std::uint64_t v) {
  std::ostringstream s;
  s << std::hex;
  s.width(16);
  s.fill('0');
  s << v;
  return s.str();
}

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

int line_of(const std::string& text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

/// Line on which each element of the top-level "jobs" array opens.
std::vector<int> job_lines(const std::string& text) {
  std::vector<int> lines;
  int line = 1;
  int depth = 0;
  int jobs_depth = -1;
  bool in_string = false;
  bool escape = false;
  std::string current;
  std::string last_string;
  for (char c : text) {
    if (c == '\n') ++line;
    if (in_string) {
      if (escape) {
        escape = false;
      } else if (c == '\\') {
        escape = true;
      } else if (c == '"') {
        in_string = false;
        last_string = current;
      } else {
        current += c;
      }
      continue;
    }
    switch (c) {
    case '"':
      in_string = true;
      current.clear();
      break;
    case '[':
      if (depth == 1 && last_string == "jobs") jobs_depth = depth + 1;
      ++depth;
      break;
    case '{':
      if (depth == jobs_depth) lines.push_back(line);
      ++depth;
      break;
    case ']':
    case '}':
      --depth;
      if (c == ']' && depth == 1) jobs_depth = -1;
      break;
    case ',':
      if (depth == 1) last_string.clear();
      break;
    default:
      break;
    }
  }
  return lines;
}

std::optional<JobKind> parse_job_kind(const std::string& s) {
  for (JobKind k : {JobKind::Eigenfamily, JobKind::Morphism, JobKind::Fiber, JobKind::Duality, JobKind::Invariance,
                    JobKind::Holomorphy}) {
    if (job_kind_label(k) == s) return k;
  }
  return std::nullopt;
}

/// Coefficient matrix size of the morphism construction on `space`, or 0.
int coefficient_size(const AmbientSpace& space) {
  if (space.is_basic_sphere()) return 0;
  if (!space.is_quaternionic()) return space.n();
  return space.n() % 2 == 0 ? space.n() / 2 : 0;
}

Cx parse_complex(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw Error("complex numbers are [re, im] pairs");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

json complex_json(Cx z) { return json::array({z.real(), z.imag()}); }

class JobReader {
public:
  JobReader(const json& obj, int line, std::vector<ConfigIssue>& issues) : obj_(obj), line_(line), issues_(issues) {}

  void fail(const std::string& reason) { issues_.push_back({line_, reason}); }

  template <typename T>
  void number(const char* key, T& into, bool required = false) {
    used_.insert(key);
    if (!obj_.contains(key)) {
      if (required) fail(std::string("missing '") + key + "'");
      return;
    }
    const json& v = obj_.at(key);
    if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) {
        fail(std::string("'") + key + "' must be an integer");
        return;
      }
      if constexpr (std::is_unsigned_v<T>) {
        if (v.is_number_unsigned() || v.get<long long>() >= 0) {
          into = v.get<T>();
        } else {
          fail(std::string("'") + key + "' must be non-negative");
        }
      } else {
        into = v.get<T>();
      }
    } else {
      if (!v.is_number()) {
        fail(std::string("'") + key + "' must be a number");
        return;
      }
      into = v.get<T>();
    }
  }

  void string(const char* key, std::string& into, bool required = false) {
    used_.insert(key);
    if (!obj_.contains(key)) {
      if (required) fail(std::string("missing '") + key + "'");
      return;
    }
    if (!obj_.at(key).is_string()) {
      fail(std::string("'") + key + "' must be a string");
      return;
    }
    into = obj_.at(key).get<std::string>();
  }

  void complex(const char* key, std::optional<Cx>& into) {
    used_.insert(key);
    if (!obj_.contains(key)) return;
    try {
      into = parse_complex(obj_.at(key));
    } catch (const Error& e) {
      fail(std::string("'") + key + "': " + e.what());
    }
  }

  void pair(const char* key, std::optional<CoefficientPair>& into) {
    used_.insert(key);
    if (!obj_.contains(key)) return;
    try {
      into = pair_from_json(obj_.at(key));
    } catch (const Error& e) {
      fail(std::string("'") + key + "': " + e.what());
    }
  }

  void reject_unknown() {
    for (const auto& [key, value] : obj_.items()) {
      if (!used_.count(key)) fail("unknown key '" + key + "'");
    }
  }

private:
  const json& obj_;
  int line_;
  std::vector<ConfigIssue>& issues_;
  std::set<std::string> used_;
};

JobConfig read_job(const json& obj, int line, std::size_t index, std::uint64_t global_seed,
                 std::vector<ConfigIssue>& issues) {
  JobConfig job;
  job.line = line;
  if (!obj.is_object()) {
    issues.push_back({line, "job " + std::to_string(index) + " is not an object"});
    return job;
  }
  JobReader r(obj, line, issues);
  std::string kind;
  r.string("kind", kind, true);
  if (!kind.empty()) {
    if (auto k = parse_job_kind(kind)) {
      job.kind = *k;
    } else {
      r.fail("unknown job kind '" + kind + "'");
    }
  }
  if (job.kind == JobKind::Invariance) job.tol = 1e-12;
  r.string("name", job.name);
  r.string("space", job.space, true);
  r.number("n", job.n);
  if (!job.space.empty()) {
    try {
      auto [label, n] = split_label(job.space);
      job.space = label;
      if (n != 0) {
        if (job.n != 0 && job.n != n) r.fail("n given twice with different values");
        job.n = n;
      }
    } catch (const Error& e) {
      r.fail(e.what());
    }
  }
  r.number("d", job.d);
  r.pair("pair", job.pair);
  if (job.pair) {
    if (obj.contains("d") && job.d != job.pair->d) r.fail("'d' disagrees with pair.d");
    job.d = job.pair->d;
  }
  r.complex("alpha", job.alpha);
  r.number("points", job.points);
  r.number("count", job.count);
  r.number("samples", job.samples);
  r.number("trials", job.trials);
  r.number("terms", job.terms);
  r.number("tol", job.tol);
  r.number("tol_h", job.tol_h);
  r.number("margin", job.margin);
  r.number("threshold", job.threshold);
  r.number("orbit_tol", job.orbit_tol);
  r.string("out", job.out);
  job.seed = splitmix(global_seed + index);
  r.number("seed", job.seed);
  r.reject_unknown();
  if (job.name.empty()) {
    job.name = std::string(job_kind_label(job.kind)) + "/" + job.space + ":n=" + std::to_string(job.n);
    if (job.d != 1) job.name += ":d=" + std::to_string(job.d);
  }
  return job;
}

JobResult started(const JobConfig& job) {
  JobResult r;
  r.name = job.name;
  r.kind = job.kind;
  r.space = job.space;
  r.n = job.n;
  return r;
}

AmbientSpace job_space(const JobConfig& job) {
  if (job.space == "sphere-basic") return AmbientSpace::basic_sphere(job.n);
  return AmbientSpace(parse_kind(job.space), job.n);
}

RationalMorphism job_morphism(const JobConfig& job, Rng& rng) {
  const AmbientSpace space = job_space(job);
  const CoefficientPair pair = job.pair ? *job.pair : random_pair(coefficient_size(space), job.d, rng);
  return build_morphism(space, pair);
}

void run_eigenfamily(const JobConfig& job, JobResult& out) {
  EigenFamily family = catalog_by_label(job.space, job.n);
  if (job.d > 1) {
    Rng rng = make_rng(job.seed, 1);
    std::vector<std::map<MultiIndex, Cx>> polys;
    for (int i = 0; i < 3; ++i) polys.push_back(random_lift_coefficients(family, job.d, job.terms, rng));
    family = lifted_family(family, job.d, polys);
  }
  const EigenReport rep = verify_eigenfamily(family, job.points, job.tol, job.seed);
  out.verdict = rep.pass ? Verdict::Pass : Verdict::Fail;
  out.residuals = {{"tau", rep.worst_tau},
                   {"kappa", rep.worst_kappa},
                   {"lambda", family.lambda.real()},
                   {"mu", family.mu.real()}};
  out.counts = {{"points", rep.points},
                {"members", static_cast<long long>(family.members.size())},
                {"evaluations", static_cast<long long>(rep.evaluations)}};
}

void run_morphism(const JobConfig& job, JobResult& out) {
  const int trials = job.pair ? 1 : job.trials;
  double tau = 0.0;
  double kappa = 0.0;
  bool pass = true;
  for (int t = 0; t < trials; ++t) {
    Rng rng = make_rng(job.seed, 100 + static_cast<std::uint64_t>(t));
    const RationalMorphism m = job_morphism(job, rng);
    const MorphismReport rep = verify_morphism(m, job.points, job.tol, job.seed + static_cast<std::uint64_t>(t));
    tau = std::max(tau, rep.worst_tau);
    kappa = std::max(kappa, rep.worst_kappa);
    pass = pass && rep.pass;
  }
  out.verdict = pass ? Verdict::Pass : Verdict::Fail;
  out.residuals = {{"tau", tau}, {"kappa", kappa}};
  out.counts = {{"points", job.points}, {"trials", trials}};
}

void run_fiber(const JobConfig& job, JobResult& out) {
  Rng rng = make_rng(job.seed, 100);
  const RationalMorphism m = job_morphism(job, rng);
  const Cx alpha = job.alpha ? *job.alpha : random_admissible_alpha(m, rng);
  out.residuals = {{"alpha_re", alpha.real()}, {"alpha_im", alpha.imag()}};
  if (m.resolvent) out.residuals.emplace_back("resolvent_at_alpha", std::abs((*m.resolvent)(alpha)));

  Verdict verdict = Verdict::Pass;
  const FiberSample sample = [&] {
    try {
      return sample_fiber(m, alpha, job.count, job.seed);
    } catch (const PartialSample& e) {
      verdict = Verdict::Partial;
      out.reason = e.what();
      return e.sample();
    }
  }();
  out.counts = {{"requested", job.count},
                {"points", static_cast<long long>(sample.points.size())},
                {"starts", sample.starts}};
  if (sample.points.empty()) {
    out.verdict = Verdict::Fail;
    return;
  }
  const MinimalityReport cert = certify(sample, job.tol_h, job.margin);
  double worst_residual = 0.0;
  for (const auto& p : sample.points) worst_residual = std::max(worst_residual, p.residual);
  out.residuals.emplace_back("fiber_residual", worst_residual);
  out.residuals.emplace_back("H_norm", cert.worst_h);
  out.residuals.emplace_back("grad_margin", cert.min_margin);
  out.counts.emplace_back("critical", cert.critical);
  if (!job.out.empty()) export_points(sample, cert, job.out);
  if (verdict == Verdict::Pass && !(cert.minimal && cert.regular)) {
    verdict = Verdict::Fail;
    out.reason = cert.minimal ? "not regular" : "not minimal";
  }
  out.verdict = verdict;
}

void run_duality(const JobConfig& job, JobResult& out) {
  Rng rng = make_rng(job.seed, 100);
  const RationalMorphism m = job_morphism(job, rng);
  const RationalMorphism dual = dualize(m);
  const RationalMorphism back = dualize(dual);

  const EigenFamily here = catalog(m.space);
  const EigenFamily there = catalog(dual.space);
  const MeasuredEigenvalues mh = measure_eigenvalues(here, job.points, job.seed);
  const MeasuredEigenvalues mt = measure_eigenvalues(there, job.points, job.seed);
  const double scale = std::max({1.0, std::abs(here.lambda), std::abs(here.mu)});
  const double flip = std::max(std::abs(mh.lambda + mt.lambda), std::abs(mh.mu + mt.mu)) / scale;
  const double claim = std::max({std::abs(mh.lambda - here.lambda), std::abs(mh.mu - here.mu),
                                 std::abs(mt.lambda - there.lambda), std::abs(mt.mu - there.mu)}) /
                       scale;
  const double spread = std::max(mh.spread, mt.spread) / scale;
  const MorphismReport dual_rep = verify_morphism(dual, job.points, job.tol, job.seed);

  const bool same_resolvent = m.resolvent->coeffs() == dual.resolvent->coeffs();
  const bool involution = back.space == m.space && back.pair->A == m.pair->A && back.pair->B == m.pair->B &&
                          back.pair->d == m.pair->d;
  out.residuals = {{"lambda", mh.lambda.real()}, {"mu", mh.mu.real()},         {"dual_lambda", mt.lambda.real()},
                   {"dual_mu", mt.mu.real()},    {"sign_flip", flip},          {"claimed", claim},
                   {"spread", spread},           {"dual_tau", dual_rep.worst_tau}, {"dual_kappa", dual_rep.worst_kappa}};
  out.counts = {{"points", job.points}, {"same_resolvent", same_resolvent}, {"involution", involution}};
  const bool pass = flip <= job.tol && claim <= job.tol && spread <= job.tol && dual_rep.pass && same_resolvent &&
                    involution;
  out.verdict = pass ? Verdict::Pass : Verdict::Fail;
  out.reason = std::string("dual space ") + dual.space.label();
}

void run_invariance(const JobConfig& job, JobResult& out) {
  Rng rng = make_rng(job.seed, 100);
  const RationalMorphism m = job_morphism(job, rng);
  const InvarianceReport inv = verify_invariance(m, job.samples, job.tol, job.seed);

  // Mean curvature along group orbits of fiber points.
  const Cx alpha = random_admissible_alpha(m, rng);
  const FiberSample sample = sample_fiber(m, alpha, std::max(1, job.count), job.seed);
  double orbit = 0.0;
  for (std::size_t i = 0; i < sample.points.size(); ++i) {
    Rng grng = make_rng(job.seed, 1000 + i);
    const RealPoint& p = sample.points[i].point;
    const RealPoint gp = group_act(m.space, random_group_element(m.space, grng), p);
    orbit = std::max(orbit, std::abs(fiber_mean_curvature(m, gp).norm() - fiber_mean_curvature(m, p).norm()));
  }
  out.residuals = {{"invariance", inv.worst}, {"orbit_H", orbit}};
  out.counts = {{"samples", inv.samples}, {"orbit_points", static_cast<long long>(sample.points.size())}};
  out.verdict = inv.pass && orbit <= job.orbit_tol ? Verdict::Pass : Verdict::Fail;
}

void run_holomorphy(const JobConfig& job, JobResult& out) {
  Rng rng = make_rng(job.seed, 100);
  const RationalMorphism m = job_morphism(job, rng);
  const Cx alpha = job.alpha ? *job.alpha : random_admissible_alpha(m, rng);
  const FiberSample sample = sample_fiber(m, alpha, job.count, job.seed);
  const MinimalityReport cert = certify(sample, job.tol_h, job.margin, CertifyOptions{true});
  const double defect = cert.max_j_defect.value_or(0.0);
  out.residuals = {{"max_defect", defect}, {"H_norm", cert.worst_h}};
  out.counts = {{"points", static_cast<long long>(sample.points.size())}};
  out.verdict = defect > job.threshold ? Verdict::Pass : Verdict::Fail;
  if (out.verdict == Verdict::Fail) out.reason = "fiber looks holomorphic at every sampled point";
}

nlohmann::ordered_json residual_value(double v) {
  if (std::isfinite(v)) return v;
  return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

} // namespace

ConfigError::ConfigError(std::vector<ConfigIssue> issues) : Error(join_issues(issues)), issues_(std::move(issues)) {}

std::string_view job_kind_label(JobKind kind) {
  switch (kind) {
  case JobKind::Eigenfamily:
    return "eigenfamily";
  case JobKind::Morphism:
    return "morphism";
  case JobKind::Fiber:
    return "fiber";
  case JobKind::Duality:
    return "duality";
  case JobKind::Invariance:
    return "invariance";
  case JobKind::Holomorphy:
    return "holomorphy";
  }
  return "unknown";
}

std::string_view verdict_label(Verdict v) {
  switch (v) {
  case Verdict::Pass:
    return "pass";
  case Verdict::Fail:
    return "fail";
  case Verdict::Partial:
    return "partial";
  }
  return "fail";
}

std::string library_version() { return HARMOMORPH_VERSION; }

CoefficientPair pair_from_json(const json& j) {
  if (!j.is_object()) throw Error("coefficient pair must be an object");
  for (const auto& [key, value] : j.items()) {
    if (key != "n" && key != "d" && key != "A" && key != "B") throw Error("unknown pair key '" + key + "'");
  }
  if (!j.contains("n") || !j["n"].is_number_integer()) throw Error("pair needs an integer 'n'");
  const int n = j["n"].get<int>();
  if (n < 1 || n > 20) throw Error("pair 'n' must lie in [1, 20]");
  const int d = j.contains("d") ? (j["d"].is_number_integer() ? j["d"].get<int>() : 0) : 1;
  if (d < 1) throw Error("pair 'd' must be a positive integer");
  auto matrix = [&](const char* key) {
    if (!j.contains(key) || !j[key].is_array()) throw Error(std::string("pair needs an array '") + key + "'");
    const json& a = j[key];
    if (a.size() != static_cast<std::size_t>(n * n)) {
      throw Error(std::string("'") + key + "' needs " + std::to_string(n * n) + " entries, got " +
                  std::to_string(a.size()));
    }
    Eigen::MatrixXcd m(n, n);
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) m(r, c) = parse_complex(a[static_cast<std::size_t>(r * n + c)]);
    }
    return m;
  };
  return CoefficientPair{matrix("A"), matrix("B"), d};
}

json pair_to_json(const CoefficientPair& pair) {
  json a = json::array();
  json b = json::array();
  for (Eigen::Index r = 0; r < pair.A.rows(); ++r) {
    for (Eigen::Index c = 0; c < pair.A.cols(); ++c) {
      a.push_back(complex_json(pair.A(r, c)));
      b.push_back(complex_json(pair.B(r, c)));
    }
  }
  return json{{"n", pair.A.rows()}, {"d", pair.d}, {"A", a}, {"B", b}};
}

std::vector<ConfigIssue> validate_job(const JobConfig& job) {
  std::vector<ConfigIssue> issues;
  auto fail = [&](const std::string& reason) { issues.push_back({job.line, job.name + ": " + reason}); };
  if (job.n < 1 || job.n > 16) fail("n must lie in [1, 16]");
  const bool basic = job.space == "sphere-basic";
  std::optional<AmbientSpace> space;
  if (job.space.empty()) {
    fail("missing space label");
  } else if (basic) {
    if (job.kind != JobKind::Eigenfamily) fail("sphere-basic only carries eigenfamily jobs");
  } else {
    try {
      if (job.n >= 1) space = AmbientSpace(parse_kind(job.space), job.n);
    } catch (const Error& e) {
      fail(e.what());
    }
  }
  if (job.points < 1) fail("points must be positive");
  if (job.count < 1) fail("count must be positive");
  if (job.samples < 1) fail("samples must be positive");
  if (job.trials < 1) fail("trials must be positive");
  if (job.terms < 1) fail("terms must be positive");
  if (!(job.tol > 0.0) || !(job.tol_h > 0.0) || !(job.margin > 0.0) || !(job.threshold >= 0.0) ||
      !(job.orbit_tol > 0.0)) {
    fail("tolerances must be positive");
  }
  if (job.kind == JobKind::Eigenfamily) {
    if (job.d < 1 || job.d > 4) fail("lift degree d must lie in [1, 4]");
    if (job.pair || job.alpha) fail("eigenfamily jobs take no pair or alpha");
    return issues;
  }
  if (job.d < 1 || job.d > 4) fail("member power d must lie in [1, 4]");
  if (!space) return issues;

  if ((job.kind == JobKind::Invariance || job.kind == JobKind::Holomorphy) && space->is_flat()) {
    fail(std::string(job_kind_label(job.kind)) + " jobs need a sphere or pseudo-sphere kind");
  }
  if (job.kind == JobKind::Holomorphy && space->is_quaternionic()) fail("holomorphy jobs need a complex kind");
  if (space->is_quaternionic() && job.d > 1) fail("quaternionic constructions use d = 1");
  const int size = coefficient_size(*space);
  if (size == 0) {
    fail("quaternionic constructions need an even n");
    return issues;
  }
  if (job.pair) {
    if (job.pair->A.rows() != size) {
      fail(space->label() + ":n=" + std::to_string(job.n) + " needs " + std::to_string(size) + "x" +
           std::to_string(size) + " coefficient matrices");
    } else if (space->is_quaternionic() && job.pair->d > 1) {
      // reported above
    } else {
      try {
        (void)build_morphism(*space, *job.pair);
      } catch (const Error& e) {
        fail(e.what());
      }
    }
  } else if (size == 1) {
    fail("1x1 coefficient pairs are always dependent; use a larger n");
  }
  return issues;
}

RunConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError({{line_of(text, e.byte), e.what()}});
  }
  std::vector<ConfigIssue> issues;
  RunConfig config;
  if (!doc.is_object()) throw ConfigError({{1, "configuration must be a JSON object"}});
  for (const auto& [key, value] : doc.items()) {
    if (key != "seed" && key != "jobs") issues.push_back({1, "unknown top-level key '" + key + "'"});
  }
  if (!doc.contains("seed")) {
    issues.push_back({1, "missing mandatory 'seed'"});
  } else if (!doc["seed"].is_number_unsigned()) {
    issues.push_back({1, "'seed' must be a non-negative integer"});
  } else {
    config.seed = doc["seed"].get<std::uint64_t>();
  }
  const std::vector<int> lines = job_lines(text);
  if (!doc.contains("jobs") || !doc["jobs"].is_array() || doc["jobs"].empty()) {
    issues.push_back({1, "'jobs' must be a non-empty array"});
  } else {
    const json& jobs = doc["jobs"];
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      const int line = i < lines.size() ? lines[i] : 0;
      const std::size_t before = issues.size();
      JobConfig job = read_job(jobs[i], line, i, config.seed, issues);
      if (issues.size() == before) {
        auto more = validate_job(job);
        issues.insert(issues.end(), more.begin(), more.end());
      }
      config.jobs.push_back(std::move(job));
    }
  }
  if (!issues.empty()) throw ConfigError(std::move(issues));
  config.config_hash = hex(fnv1a(doc.dump()));
  return config;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError({{0, "cannot read " + path.string()}});
  std::ostringstream s;
  s << in.rdbuf();
  return parse_config(s.str());
}

RunConfig default_suite(std::uint64_t seed) {
  json jobs = json::array();
  auto add = [&](json job) { jobs.push_back(std::move(job)); };
  const std::vector<std::string> complex = {"flat-complex", "flat-complex-1", "sphere-complex", "pseudosphere-complex"};
  const std::vector<std::string> quaternionic = {"flat-quaternionic", "flat-quaternionic-1", "sphere-quaternionic",
                                                 "pseudosphere-quaternionic"};
  for (const auto& label : catalog_labels()) {
    for (int n : {2, 3}) {
      for (int d : {1, 2}) add({{"kind", "eigenfamily"}, {"space", label}, {"n", n}, {"d", d}, {"points", 100}});
    }
  }
  for (const auto& label : complex) {
    for (int n : {2, 3}) {
      for (int d : {1, 2}) {
        add({{"kind", "morphism"}, {"space", label}, {"n", n}, {"d", d}, {"points", 100}});
        add({{"kind", "fiber"}, {"space", label}, {"n", n}, {"d", d}, {"count", 25}});
      }
    }
  }
  for (const auto& label : quaternionic) {
    for (int n : {4, 6}) {
      add({{"kind", "morphism"}, {"space", label}, {"n", n}, {"points", 100}});
      add({{"kind", "fiber"}, {"space", label}, {"n", n}, {"count", 25}});
    }
  }
  for (const auto& [label, n] : std::vector<std::pair<std::string, int>>{{"sphere-complex", 2},
                                                                          {"sphere-complex", 3},
                                                                          {"sphere-quaternionic", 4},
                                                                          {"sphere-quaternionic", 6},
                                                                          {"flat-complex", 3},
                                                                          {"flat-quaternionic", 4}}) {
    add({{"kind", "duality"}, {"space", label}, {"n", n}, {"points", 100}});
  }
  for (const auto& [label, n] : std::vector<std::pair<std::string, int>>{{"sphere-complex", 2},
                                                                          {"pseudosphere-complex", 2},
                                                                          {"sphere-quaternionic", 6},
                                                                          {"pseudosphere-quaternionic", 4}}) {
    add({{"kind", "invariance"}, {"space", label}, {"n", n}, {"samples", 20}, {"count", 5}});
  }
  add({{"kind", "holomorphy"}, {"space", "sphere-complex"}, {"n", 2}, {"count", 25}});
  const json doc{{"seed", seed}, {"jobs", jobs}};
  return parse_config(doc.dump(2));
}

JobResult run_job(const JobConfig& job) {
  JobResult out = started(job);
  const auto t0 = std::chrono::steady_clock::now();
  try {
    switch (job.kind) {
    case JobKind::Eigenfamily:
      run_eigenfamily(job, out);
      break;
    case JobKind::Morphism:
      run_morphism(job, out);
      break;
    case JobKind::Fiber:
      run_fiber(job, out);
      break;
    case JobKind::Duality:
      run_duality(job, out);
      break;
    case JobKind::Invariance:
      run_invariance(job, out);
      break;
    case JobKind::Holomorphy:
      run_holomorphy(job, out);
      break;
    }
  } catch (const Error& e) {
    out.verdict = Verdict::Fail;
    out.reason = e.what();
  }
  out.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

Report run(const RunConfig& config) {
  Report report{config.config_hash, config.seed, library_version(), {}};
  report.jobs.resize(config.jobs.size());
  parallel_for(config.jobs.size(), [&](std::size_t i) { report.jobs[i] = run_job(config.jobs[i]); });
  return report;
}

bool Report::all_pass() const {
  return std::all_of(jobs.begin(), jobs.end(), [](const JobResult& j) { return j.verdict == Verdict::Pass; });
}

nlohmann::ordered_json Report::to_json(bool with_wall_time) const {
  using oj = nlohmann::ordered_json;
  oj out;
  out["metadata"] = {{"config_hash", config_hash}, {"seed", seed}, {"version", version}};
  int passed = 0;
  int failed = 0;
  int partial = 0;
  oj list = oj::array();
  for (const auto& j : jobs) {
    oj entry;
    entry["name"] = j.name;
    entry["kind"] = job_kind_label(j.kind);
    entry["space"] = j.space;
    entry["n"] = j.n;
    entry["verdict"] = verdict_label(j.verdict);
    if (!j.reason.empty()) entry["reason"] = j.reason;
    oj residuals = oj::object();
    for (const auto& [k, v] : j.residuals) residuals[k] = residual_value(v);
    entry["residuals"] = residuals;
    oj counts = oj::object();
    for (const auto& [k, v] : j.counts) counts[k] = v;
    entry["counts"] = counts;
    if (with_wall_time) entry["wall_time_s"] = j.wall_time_s;
    list.push_back(entry);
    passed += j.verdict == Verdict::Pass;
    failed += j.verdict == Verdict::Fail;
    partial += j.verdict == Verdict::Partial;
  }
  out["jobs"] = list;
  out["summary"] = {{"jobs", jobs.size()}, {"passed", passed}, {"failed", failed}, {"partial", partial}};
  return out;
}

} // namespace harmomorph
