#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ttl::eval {

// 100 * (treated - base) / base on unrounded inputs. Throws
// Error(kUndefinedImprovement) when base is 0.
double improvement_pct(double base, double treated);

// "+12.50" style text, or "NA" when undefined.
std::string format_improvement(std::optional<double> pct);

std::optional<double> try_improvement_pct(std::optional<double> base,
                                          std::optional<double> treated);

double mean(const std::vector<double>& xs);

inline constexpr const char* kBaselineArm = "baseline";
inline constexpr const char* kExperienceArm = "experience";

// rewards[arm][sample][round], rounds 0-based.
struct RewardSeries {
  std::map<std::string, std::vector<std::vector<double>>> rewards;

  void set(const std::string& arm, int sample, int round, double reward);
  int samples(const std::string& arm) const;
  int rounds() const;  // after validate()

  // Throws Error(kShapeMismatch) unless every arm is rectangular with the
  // same round count and at least one sample and round.
  void validate() const;
};

// points are 1-based in meaning: index t-1 holds round t.
struct CumulativeCurve {
  std::vector<double> per_round;   // r(t)
  std::vector<double> cumulative;  // R(t)
};

// r(1) is the pooled mean of every round-0 reward across all arms and
// samples; r(t>1) is the arm's mean over samples at stored round t-1;
// R(t) is the running mean of r(1..t).
std::map<std::string, CumulativeCurve> cumulative_curves(const RewardSeries& series);

// Single-stream running mean, as used for one participant's rounds.
CumulativeCurve running_curve(const std::vector<double>& rewards);

}  // namespace ttl::eval
