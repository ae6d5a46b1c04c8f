// Acceptance suite: runs the library's self-contained correctness criteria
// and prints one pass/fail line per criterion.  With --criterion K only the
// K-th criterion runs.  Exit code 0 iff everything that ran passed.

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include "circlenet/verification.hpp"

namespace {

void print_result(const circlenet::CriterionResult& r) {
  std::string detail;
  for (const std::string& n : r.notes) {
    if (!detail.empty()) detail += "; ";
    detail += n;
  }
  std::printf("[%s] criterion %02d %-40s (%6.2f s)  %s\n",
              r.pass ? "PASS" : "FAIL", r.index, r.name.c_str(), r.seconds,
              detail.c_str());
  std::fflush(stdout);
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else if (std::strcmp(argv[i], "--list") == 0) {
      for (int k = 1; k <= circlenet::criterion_count(); ++k)
        std::printf("%2d %s\n", k, circlenet::criterion_name(k).c_str());
      return 0;
    } else {
      std::fprintf(stderr,
                   "usage: %s [--criterion K] [--list]\n", argv[0]);
      return 2;
    }
  }
  if (only < 0 || only > circlenet::criterion_count()) {
    std::fprintf(stderr, "criterion index must be in 1..%d\n",
                 circlenet::criterion_count());
    return 2;
  }

  bool all_pass = true;
  if (only > 0) {
    const circlenet::CriterionResult r = circlenet::run_criterion(only);
    print_result(r);
    all_pass = r.pass;
  } else {
    for (int k = 1; k <= circlenet::criterion_count(); ++k) {
      const circlenet::CriterionResult r = circlenet::run_criterion(k);
      print_result(r);
      all_pass = all_pass && r.pass;
    }
    std::printf("%s\n", all_pass ? "ALL CRITERIA PASS" : "SOME CRITERIA FAIL");
  }
  return all_pass ? 0 : 1;
}
