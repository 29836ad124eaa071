// Acceptance run: one PASS/FAIL line per criterion, failing checks listed
// beneath it. Usage: acceptance <path to the bilateral CLI>.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "bilateral_tools/report.hpp"
#include "bilateral_tools/suites.hpp"

namespace {

using namespace bilateral::tools;
using Clock = std::chrono::steady_clock;

constexpr std::uint64_t kSeed = 7;

struct Criterion {
  int id;
  std::string title;
  double time_limit_s;  ///< 0 when no runtime bound applies
};

const std::vector<Criterion> kCriteria{
    {1, "brute-force equivalence", 60.0},
    {2, "monotonicity suites", 300.0},
    {3, "invariance under lowered obstacle", 0.0},
    {4, "reflection", 0.0},
    {5, "multiplier split", 0.0},
    {6, "derivative consistency", 0.0},
    {7, "limits of reduced derivatives", 0.0},
    {8, "adjoint subgradient and descent", 0.0},
    {9, "counterexample series", 30.0},
};

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return {};
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

// Runs `verify-all --seed 7` twice and compares the reports byte for byte.
bool determinism(const std::string& cli, std::vector<std::string>& notes) {
  char pattern[] = "/tmp/bilateral_acceptance_XXXXXX";
  const char* base = mkdtemp(pattern);
  if (base == nullptr) {
    notes.push_back("cannot create a temporary directory");
    return false;
  }
  const std::filesystem::path root(base);
  std::string texts[2][2];
  for (int run = 0; run < 2; ++run) {
    const std::filesystem::path out = root / ("run" + std::to_string(run));
    const std::string cmd = "\"" + cli + "\" verify-all --seed " + std::to_string(kSeed) +
                            " --out \"" + out.string() + "\" > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    notes.push_back("run " + std::to_string(run + 1) + " exit status " +
                    std::to_string(WEXITSTATUS(status)));
    texts[run][0] = read_file(out / "verify_all.json");
    texts[run][1] = read_file(out / "verify_all.csv");
  }
  std::filesystem::remove_all(root);
  bool ok = true;
  const char* names[2] = {"verify_all.json", "verify_all.csv"};
  for (int f = 0; f < 2; ++f) {
    if (texts[0][f].empty()) {
      notes.push_back(std::string(names[f]) + " missing");
      ok = false;
    } else if (texts[0][f] != texts[1][f]) {
      notes.push_back(std::string(names[f]) + " differs between runs");
      ok = false;
    } else {
      notes.push_back(std::string(names[f]) + " identical (" + std::to_string(texts[0][f].size()) +
                      " bytes)");
    }
  }
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: acceptance <bilateral-cli>\n";
    return 2;
  }
  bool all = true;

  for (const Criterion& c : kCriteria) {
    const auto t0 = Clock::now();
    std::vector<SuiteResult> results;
    for (const auto& e : suite_registry()) {
      if (e.criterion == c.id) results.push_back(e.run(kSeed));
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();

    bool pass = !results.empty();
    std::vector<std::string> lines;
    for (const auto& s : results) {
      for (const auto& chk : s.checks) {
        if (chk.passed) continue;
        pass = false;
        lines.push_back(s.name + "/" + chk.name + ": " + fmt(chk.value) + " " + chk.relation + " " +
                        fmt(chk.limit) + " violated");
      }
    }
    if (c.time_limit_s > 0 && secs >= c.time_limit_s) {
      pass = false;
      lines.push_back("runtime " + fmt(secs) + " s exceeds " + fmt(c.time_limit_s) + " s");
    }
    all = all && pass;
    std::printf("Criterion %d (%s): %s  [%.2f s]\n", c.id, c.title.c_str(), pass ? "PASS" : "FAIL", secs);
    for (const auto& l : lines) std::printf("    %s\n", l.c_str());
  }

  {
    const auto t0 = Clock::now();
    std::vector<std::string> notes;
    const bool pass = determinism(argv[1], notes);
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    all = all && pass;
    std::printf("Criterion 10 (determinism of verify-all --seed 7): %s  [%.2f s]\n",
                pass ? "PASS" : "FAIL", secs);
    for (const auto& n : notes) std::printf("    %s\n", n.c_str());
  }

  std::printf("%s\n", all ? "ALL CRITERIA PASS" : "SOME CRITERIA FAIL");
  return all ? 0 : 1;
}
