#include "harmomorph/cli.hpp"

#include "harmomorph/report.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>

namespace harmomorph {

namespace {

constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;

void print_issues(const ConfigError& e, std::ostream& err) { err << e.what() << '\n'; }

/// Row-major [[re, im], ...] of a square matrix.
Eigen::MatrixXcd parse_matrix(const std::string& text, const char* flag) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError({{0, std::string(flag) + ": " + e.what()}});
  }
  const auto size = static_cast<int>(std::lround(std::sqrt(static_cast<double>(j.size()))));
  if (!j.is_array() || j.empty() || static_cast<std::size_t>(size * size) != j.size()) {
    throw ConfigError({{0, std::string(flag) + " needs a square row-major list of [re, im] entries"}});
  }
  try {
    return pair_from_json({{"n", size}, {"A", j}, {"B", j}}).A;
  } catch (const Error& e) {
    throw ConfigError({{0, std::string(flag) + ": " + e.what()}});
  }
}

Cx parse_alpha(const std::string& text) {
  try {
    const nlohmann::json j = nlohmann::json::parse(text);
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
      return {j[0].get<double>(), j[1].get<double>()};
    }
  } catch (const nlohmann::json::parse_error&) {
  }
  throw ConfigError({{0, "--alpha takes a number or [re, im]"}});
}

int write_report(const Report& report, const std::string& path, std::ostream& out, std::ostream& err) {
  const std::string text = report.to_json().dump(2) + "\n";
  if (path.empty()) {
    out << text;
  } else {
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file || !(file << text)) {
      err << "IoError: cannot write " << path << '\n';
      return kExitFail;
    }
  }
  for (const auto& j : report.jobs) {
    err << std::left << std::setw(8) << verdict_label(j.verdict) << j.name;
    if (!j.reason.empty() && j.verdict != Verdict::Pass) err << "  (" << j.reason << ')';
    err << '\n';
  }
  return report.exit_code();
}

void print_catalog(int n, std::ostream& out) {
  out << std::left << std::setw(30) << "space" << std::setw(8) << "C-dim" << std::setw(9) << "members"
      << std::setw(14) << "lambda" << "mu\n";
  for (const auto& label : catalog_labels()) {
    const EigenFamily f = catalog_by_label(label, n);
    out << std::setw(30) << (label + ":n=" + std::to_string(n)) << std::setw(8) << f.space.complex_dim()
        << std::setw(9) << f.members.size() << std::setw(14) << f.lambda.real() << f.mu.real() << '\n';
  }
}

} // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical laboratory for eigenfamilies, rational harmonic morphisms and their minimal fibres",
               "harmomorph"};
  app.set_version_flag("--version", library_version());
  app.require_subcommand(1);

  std::string config_path;
  std::string report_path;
  bool use_default = false;
  std::uint64_t suite_seed = 0;
  auto* verify = app.add_subcommand("verify", "Run the jobs of a JSON configuration and emit a report");
  auto* config_opt = verify->add_option("--config", config_path, "Run configuration (JSON)");
  auto* default_opt = verify->add_flag("--default", use_default, "Run the built-in default suite");
  auto* suite_seed_opt = verify->add_option("--seed", suite_seed, "Seed of the default suite");
  verify->add_option("--out", report_path, "Report path (stdout when omitted)");
  config_opt->excludes(default_opt);
  suite_seed_opt->needs(default_opt);

  JobConfig job;
  job.kind = JobKind::Fiber;
  std::string a_text;
  std::string b_text;
  std::string alpha_text;
  auto* sample = app.add_subcommand("sample-fiber", "Sample one fiber, certify it and export the points");
  sample->add_option("--space", job.space, "Space label, e.g. sphere-complex")->required();
  sample->add_option("--n", job.n, "Space parameter n")->required();
  sample->add_option("--d", job.d, "Member power d")->capture_default_str();
  sample->add_option("--A", a_text, "Row-major [[re,im],...] matrix A (random when omitted)");
  sample->add_option("--B", b_text, "Row-major [[re,im],...] matrix B (random when omitted)");
  sample->add_option("--alpha", alpha_text, "Fiber value: a number or [re,im] (random admissible when omitted)");
  sample->add_option("--count", job.count, "Points to accept")->capture_default_str();
  sample->add_option("--seed", job.seed, "Seed")->required();
  sample->add_option("--out", job.out, "CSV path for the accepted points");

  int catalog_n = 2;
  auto* cat = app.add_subcommand("catalog", "List spaces and their eigenfamilies");
  cat->add_option("--n", catalog_n, "Space parameter n")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << library_version() << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    for (auto* sub : app.get_subcommands()) err << sub->help();
    return kExitConfig;
  }

  try {
    if (verify->parsed()) {
      if (!use_default && config_path.empty()) throw ConfigError({{0, "verify needs --config or --default"}});
      if (use_default && suite_seed_opt->count() == 0) throw ConfigError({{0, "--default needs --seed"}});
      const RunConfig config = use_default ? default_suite(suite_seed) : load_config(config_path);
      return write_report(run(config), report_path, out, err);
    }
    if (sample->parsed()) {
      if (a_text.empty() != b_text.empty()) throw ConfigError({{0, "--A and --B go together"}});
      if (!a_text.empty()) job.pair = CoefficientPair{parse_matrix(a_text, "--A"), parse_matrix(b_text, "--B"), job.d};
      if (!alpha_text.empty()) job.alpha = parse_alpha(alpha_text);
      try {
        auto [label, n] = split_label(job.space);
        job.space = label;
        if (n != 0) job.n = n;
      } catch (const Error& e) {
        throw ConfigError({{0, e.what()}});
      }
      job.name = "fiber/" + job.space + ":n=" + std::to_string(job.n);
      if (auto issues = validate_job(job); !issues.empty()) throw ConfigError(std::move(issues));
      const RunConfig config{job.seed, {job}, ""};
      return write_report(run(config), "", out, err);
    }
    if (cat->parsed()) {
      if (catalog_n < 1 || catalog_n > 16) throw ConfigError({{0, "--n must lie in [1, 16]"}});
      print_catalog(catalog_n, out);
      return 0;
    }
  } catch (const ConfigError& e) {
    print_issues(e, err);
    return kExitConfig;
  } catch (const Error& e) {
    err << e.what() << '\n';
    return kExitFail;
  }
  return kExitConfig;
}

} // namespace harmomorph
