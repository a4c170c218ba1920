#pragma once

#include <functional>
#include <string>
#include <vector>

#include "crot/model.hpp"

namespace crot::cli {

enum class VerifyLevel { Quick, Full };

/// Closed forms under test; replaceable so a fixture can inject faults.
struct VerifyHooks {
  std::function<double(const ProtocolParams&, PovmWeights)> tr_e3 = crot::tr_e3;
  std::function<double(const ProtocolParams&, PovmWeights)> det_e3 = crot::det_e3;
};

struct CheckResult {
  std::string name;
  bool pass;
  std::string detail;
};

std::vector<CheckResult> run_verify(VerifyLevel level, const VerifyHooks& hooks = {});

}  // namespace crot::cli
