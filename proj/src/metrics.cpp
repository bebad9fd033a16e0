#include "coughcount/metrics.hpp"

#include "coughcount/error.hpp"

namespace coughcount {

const char* to_string(ScoringMode mode) {
  return mode == ScoringMode::kSample ? "SB" : "EB";
}

std::optional<double> ratio(double num, double den) {
  if (den == 0) return std::nullopt;
  return num / den;
}

std::optional<double> f1_score(std::optional<double> se, std::optional<double> pr) {
  if (!se || !pr) return std::nullopt;
  return ratio(2.0 * *se * *pr, *se + *pr);
}

double fp_per_hour(std::int64_t fp, double monitored_duration) {
  if (!(monitored_duration > 0)) {
    throw Error(ErrorCode::kZeroDuration,
                "FP/hr needs a positive monitored duration");
  }
  return static_cast<double>(fp) / (monitored_duration / 3600.0);
}

}  // namespace coughcount
