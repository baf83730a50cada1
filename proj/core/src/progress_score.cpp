#include "labmech/progress_score.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "labmech/error.hpp"

namespace labmech {

double progress_score(const std::vector<ProgressTerm>& terms) {
  if (terms.empty()) throw Error(ErrorCode::InvalidArgument, "progress score needs at least one term");
  double weight_sum = 0.0;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const ProgressTerm& t = terms[i];
    if (!std::isfinite(t.initial) || !std::isfinite(t.target) || !std::isfinite(t.final_value) ||
        !std::isfinite(t.weight) || t.weight < 0.0) {
      throw Error(ErrorCode::InvalidArgument, "term " + std::to_string(i) + " is not finite/non-negative");
    }
    if (t.initial == t.target) {
      throw Error(ErrorCode::DegenerateTerm, "term " + std::to_string(i) + " has initial == target");
    }
    weight_sum += t.weight;
  }
  if (std::abs(weight_sum - 1.0) > 1e-12) {
    throw Error(ErrorCode::InvalidArgument, "weights must sum to 1");
  }
  double score = 0.0;
  for (const ProgressTerm& t : terms) {
    score += t.weight *
             std::max(1.0 - std::abs(t.final_value - t.target) / std::abs(t.initial - t.target), 0.0);
  }
  return std::clamp(score, 0.0, 1.0);
}

}  // namespace labmech
