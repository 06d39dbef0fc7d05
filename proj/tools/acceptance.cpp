// Runs the reproduction manifest and prints one PASS/FAIL line per acceptance
// criterion. Exit status 0 only when every criterion passes.
#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <iomanip>
#include <iostream>

#include "radomult/sdpgen.hpp"
#include "reproduce.hpp"

int main(int argc, char** argv) {
  using namespace radomult;
  CLI::App app{"Acceptance criteria for radomult"};
  std::string manifest = std::string(RADOMULT_DATA_DIR) + "/reproduce.manifest";
  std::string work_dir;
  bool verbose = false;
  int threads = 0;
  app.add_option("--manifest", manifest, "Reproduction manifest")->check(CLI::ExistingFile);
  app.add_option("--work-dir", work_dir, "Directory for SDP scratch files");
  app.add_option("--threads", threads, "Worker threads (0: OpenMP default)");
  app.add_flag("-v,--verbose", verbose, "Print every check");
  CLI11_PARSE(app, argc, argv);

  cli::RunOptions o;
  o.base_dir = std::filesystem::path(manifest).parent_path().string();
  o.solver_command = default_solver_command();
  o.work_dir = work_dir.empty() ? (std::filesystem::temp_directory_path() / "radomult_acceptance").string() : work_dir;
  o.threads = threads;

  cli::Runner runner(o);
  std::vector<cli::CheckResult> results;
  for (const auto& spec : cli::read_checks(manifest)) {
    results.push_back(runner.run(spec));
    const auto& r = results.back();
    // Failures are always shown; they are what the summary line cannot explain.
    if (verbose || !r.pass) {
      std::cerr << "  [" << r.criterion << "] " << (r.pass ? "ok  " : "FAIL") << ' ' << r.label << ": claimed "
                << r.claimed << ", computed " << r.computed << " (" << std::fixed << std::setprecision(1)
                << r.seconds << " s)\n";
    }
  }

  bool all = true;
  auto summaries = cli::summarize(results);
  for (int c = 1; c <= 7; ++c) {
    auto it = std::find_if(summaries.begin(), summaries.end(), [c](const auto& s) { return s.criterion == c; });
    const bool pass = it != summaries.end() && it->pass();
    all = all && pass;
    std::cout << "criterion " << c << ": " << (pass ? "PASS" : "FAIL") << "  " << cli::criterion_title(c);
    if (it != summaries.end())
      std::cout << " (" << it->passed << "/" << it->total << " checks, " << std::fixed << std::setprecision(1)
                << it->seconds << " s)";
    else
      std::cout << " (no checks)";
    std::cout << '\n';
  }
  return all ? 0 : 1;
}
