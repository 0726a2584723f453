#include "eval/metrics.hpp"

#include <algorithm>

#include "util/error.hpp"
#include "util/text.hpp"

namespace ttl::eval {

double improvement_pct(double base, double treated) {
  if (base == 0.0) {
    throw Error(ErrorCode::kUndefinedImprovement, "improvement over a zero baseline");
  }
  return 100.0 * (treated - base) / base;
}

std::optional<double> try_improvement_pct(std::optional<double> base,
                                          std::optional<double> treated) {
  if (!base || !treated) return std::nullopt;
  try {
    return improvement_pct(*base, *treated);
  } catch (const Error&) {
    return std::nullopt;
  }
}

std::string format_improvement(std::optional<double> pct) {
  if (!pct) return "NA";
  std::string s = text::format_fixed(*pct, 2);
  if (s == "-0.00") s = "0.00";
  if (s[0] != '-' && s != "0.00") s = "+" + s;
  return s;
}

// Incremental mean: a constant input comes back exactly, and the clamp keeps
// rounding from stepping outside the inputs' range.
double mean(const std::vector<double>& xs) {
  if (xs.empty()) throw Error(ErrorCode::kEmptyInput, "mean of nothing");
  double m = 0.0;
  double lo = xs.front();
  double hi = xs.front();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    m += (xs[i] - m) / static_cast<double>(i + 1);
    lo = std::min(lo, xs[i]);
    hi = std::max(hi, xs[i]);
  }
  return std::clamp(m, lo, hi);
}

void RewardSeries::set(const std::string& arm, int sample, int round, double reward) {
  if (sample < 0 || round < 0) throw Error(ErrorCode::kInvalidArgument, "negative index");
  auto& rows = rewards[arm];
  if (rows.size() <= static_cast<std::size_t>(sample)) rows.resize(sample + 1);
  auto& row = rows[sample];
  if (row.size() <= static_cast<std::size_t>(round)) row.resize(round + 1, 0.0);
  row[round] = reward;
}

int RewardSeries::samples(const std::string& arm) const {
  auto it = rewards.find(arm);
  return it == rewards.end() ? 0 : static_cast<int>(it->second.size());
}

int RewardSeries::rounds() const {
  validate();
  return static_cast<int>(rewards.begin()->second.front().size());
}

void RewardSeries::validate() const {
  if (rewards.empty()) throw Error(ErrorCode::kShapeMismatch, "no arms");
  std::optional<std::size_t> t;
  for (const auto& [arm, rows] : rewards) {
    if (rows.empty()) throw Error(ErrorCode::kShapeMismatch, "arm " + arm + " has no samples");
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].empty()) {
        throw Error(ErrorCode::kShapeMismatch,
                    "arm " + arm + " sample " + std::to_string(i) + " has no rounds");
      }
      if (!t) t = rows[i].size();
      if (rows[i].size() != *t) {
        throw Error(ErrorCode::kShapeMismatch,
                    "arm " + arm + " sample " + std::to_string(i) + " has " +
                        std::to_string(rows[i].size()) + " rounds, expected " +
                        std::to_string(*t));
      }
    }
  }
}

std::map<std::string, CumulativeCurve> cumulative_curves(const RewardSeries& series) {
  series.validate();
  const int T = series.rounds();

  std::vector<double> round0;
  for (const auto& [arm, rows] : series.rewards) {
    for (const auto& row : rows) round0.push_back(row[0]);
  }
  const double pooled = mean(round0);

  std::map<std::string, CumulativeCurve> out;
  for (const auto& [arm, rows] : series.rewards) {
    std::vector<double> per_round{pooled};
    for (int t = 2; t <= T; ++t) {
      std::vector<double> column;
      for (const auto& row : rows) column.push_back(row[t - 1]);
      per_round.push_back(mean(column));
    }
    CumulativeCurve c = running_curve(per_round);
    out.emplace(arm, std::move(c));
  }
  return out;
}

CumulativeCurve running_curve(const std::vector<double>& rewards) {
  CumulativeCurve c;
  double m = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  for (std::size_t i = 0; i < rewards.size(); ++i) {
    const double x = rewards[i];
    lo = i == 0 ? x : std::min(lo, x);
    hi = i == 0 ? x : std::max(hi, x);
    m += (x - m) / static_cast<double>(i + 1);
    m = std::clamp(m, lo, hi);
    c.per_round.push_back(x);
    c.cumulative.push_back(m);
  }
  return c;
}

}  // namespace ttl::eval
