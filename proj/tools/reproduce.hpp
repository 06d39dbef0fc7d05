#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace radomult::cli {

/// One line of a reproduction manifest: "<criterion> <kind> key=value ...".
struct CheckSpec {
  int criterion = 0;
  std::string kind;
  std::map<std::string, std::string> args;
  int line = 0;
};

struct CheckResult {
  int criterion = 0;
  std::string kind;
  std::string label;
  std::string claimed;
  std::string computed;
  bool pass = false;
  double seconds = 0;
};

struct RunOptions {
  std::string base_dir;  // relative paths in the manifest resolve here
  std::string solver_command;
  std::string work_dir;  // scratch files for the SDP round trip
  std::size_t memory_budget = std::size_t{256} << 20;
  int threads = 0;
};

std::vector<CheckSpec> read_checks(const std::string& path);

class DensityCache;

/// Runs checks in order; families and density tables are reused across them.
class Runner {
 public:
  explicit Runner(RunOptions options);
  ~Runner();
  Runner(const Runner&) = delete;
  Runner& operator=(const Runner&) = delete;

  /// Never throws for a failing computation; the exception text becomes the
  /// computed value of a failed check.
  CheckResult run(const CheckSpec& spec);

 private:
  RunOptions options_;
  std::unique_ptr<DensityCache> cache_;
};

struct CriterionSummary {
  int criterion = 0;
  int passed = 0;
  int total = 0;
  double seconds = 0;
  bool pass() const { return total > 0 && passed == total; }
};

std::vector<CriterionSummary> summarize(const std::vector<CheckResult>& results);

/// Short description of each acceptance criterion.
std::string criterion_title(int criterion);

}  // namespace radomult::cli
