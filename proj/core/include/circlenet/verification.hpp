#pragma once

// Self-contained acceptance checks for the whole library, plus the canonical
// CSV renderings of experiment results.  Each criterion pins its tolerances
// in code, runs end to end without external data, and reports pass/fail with
// the key measured numbers.

#include <string>
#include <vector>

#include "circlenet/approximation.hpp"
#include "circlenet/dynamics.hpp"

namespace circlenet {

struct CriterionResult {
  int index = 0;  // 1-based
  std::string name;
  bool pass = false;
  double seconds = 0.0;
  std::vector<std::string> notes;  // key measured values, human readable
};

int criterion_count();            // 12
std::string criterion_name(int k);  // k in [1, criterion_count()]
CriterionResult run_criterion(int k);
std::vector<CriterionResult> run_all_criteria();

// ---------------------------------------------------------------------------
// CSV renderings (17 significant digits; identical inputs give identical
// bytes regardless of thread count)
// ---------------------------------------------------------------------------

std::string divergence_csv(const DivergenceReport& rep);
std::string flow_csv(const FlowResult& res);
std::string langevin_csv(const LangevinResult& res);
std::string langevin_hist_csv(const LangevinResult& res,
                              const LangevinConfig& cfg);
std::string fokker_csv(const FpResult& res);
std::string localize_csv(const std::vector<LocalizationReport>& rows);
std::string certificate_csv(const PoincareCertificate& cert);

}  // namespace circlenet
