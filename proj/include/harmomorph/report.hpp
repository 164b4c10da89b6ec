#pragma once

#include "harmomorph/fiber.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace harmomorph {

struct ConfigIssue {
  int line = 0;  // 1-based; 0 when no position applies
  std::string reason;
};

/// Every problem found in a run configuration, reported together.
class ConfigError : public Error {
public:
  explicit ConfigError(std::vector<ConfigIssue> issues);

  const std::vector<ConfigIssue>& issues() const { return issues_; }

private:
  std::vector<ConfigIssue> issues_;
};

enum class JobKind { Eigenfamily, Morphism, Fiber, Duality, Invariance, Holomorphy };

std::string_view job_kind_label(JobKind kind);

struct JobConfig {
  JobKind kind = JobKind::Eigenfamily;
  std::string name;
  std::string space;  // kind label, e.g. "sphere-complex"
  int n = 0;
  int d = 1;  // member power for morphisms, lift degree for eigenfamily jobs
  std::optional<CoefficientPair> pair;
  std::optional<Cx> alpha;
  int points = 100;
  int count = 25;
  int samples = 20;
  int trials = 1;
  int terms = 3;
  double tol = 1e-8;
  double tol_h = 1e-6;
  double margin = 1e-6;
  double threshold = 0.1;  // holomorphy defect that counts as non-holomorphic
  double orbit_tol = 1e-8;  // mean curvature variation along group orbits
  std::uint64_t seed = 0;
  std::string out;  // CSV path for fiber jobs
  int line = 0;
};

struct RunConfig {
  std::uint64_t seed = 0;
  std::vector<JobConfig> jobs;
  std::string config_hash;  // FNV-1a of the canonical JSON
};

/// Parses and validates a JSON run configuration. Throws ConfigError listing
/// every problem with its line.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

/// Checks a single job's preconditions; used for ad-hoc jobs built from flags.
std::vector<ConfigIssue> validate_job(const JobConfig& job);

/// All eight spaces with n in {2, 3} (quaternionic morphisms at n in {4, 6}),
/// d in {1, 2}, 100 points per identity and 25 fiber points per construction.
RunConfig default_suite(std::uint64_t seed);

CoefficientPair pair_from_json(const nlohmann::json& j);
nlohmann::json pair_to_json(const CoefficientPair& pair);

enum class Verdict { Pass, Fail, Partial };

std::string_view verdict_label(Verdict v);

struct JobResult {
  std::string name;
  JobKind kind = JobKind::Eigenfamily;
  std::string space;
  int n = 0;
  Verdict verdict = Verdict::Fail;
  std::string reason;
  std::vector<std::pair<std::string, double>> residuals;
  std::vector<std::pair<std::string, long long>> counts;
  double wall_time_s = 0.0;
};

struct Report {
  std::string config_hash;
  std::uint64_t seed = 0;
  std::string version;
  std::vector<JobResult> jobs;

  bool all_pass() const;
  /// Exit status: 0 when every job passed, 1 otherwise.
  int exit_code() const { return all_pass() ? 0 : 1; }
  nlohmann::ordered_json to_json(bool with_wall_time = true) const;
};

JobResult run_job(const JobConfig& job);

/// Runs every job on the worker pool and assembles the report in job order.
Report run(const RunConfig& config);

std::string library_version();

} // namespace harmomorph
