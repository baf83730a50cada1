#pragma once

#include <vector>

namespace labmech {

struct ProgressTerm {
  double initial = 0.0;
  double target = 0.0;
  double final_value = 0.0;
  double weight = 0.0;
};

/// Weighted relative progress: sum of w_i * max(1 - |final - target| /
/// |initial - target|, 0). Weights must be non-negative and sum to 1 within
/// 1e-12; a term with initial == target raises Error(DegenerateTerm).
double progress_score(const std::vector<ProgressTerm>& terms);

}  // namespace labmech
