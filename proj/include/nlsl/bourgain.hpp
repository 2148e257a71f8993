#pragma once

// Bourgain's interval-concentration selection.
//
// Given consecutive intervals J_1, ..., J_L (a partition of a time interval
// into pieces of equal space-time mass) and a parameter η ∈ (0, 1), the
// procedure repeatedly
//   1. picks the longest interval J_{l_k} of the current run,
//   2. removes every interval of that run with length ≥ |J_{l_k}|/2,
//   3. stops if at most 100/η intervals survive, and otherwise
//   4. descends into the most populated run of consecutive survivors.
// The picks shrink dyadically and cluster around a time t̄:
//   |J_{l_k}| ≥ 2|J_{l_{k+1}}|,  dist(t̄, J_{l_k}) ≤ η⁻¹|J_{l_k}|,
//   K ≥ −log(L) / (2 log(η/8)).

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nlsl/errors.hpp"

namespace nlsl {

struct Interval {
  double start = 0.0;
  double end = 0.0;
  // Position in the originating partition, or -1 when unlabeled.
  long label = -1;

  double length() const noexcept { return end - start; }
};

/// Sorted intervals with pairwise-disjoint interiors and positive lengths.
class IntervalFamily {
 public:
  IntervalFamily() = default;
  /// Throws ValidationError unless sorted, disjoint and of positive length.
  explicit IntervalFamily(std::vector<Interval> intervals);

  const std::vector<Interval>& intervals() const noexcept { return intervals_; }
  std::size_t size() const noexcept { return intervals_.size(); }
  bool empty() const noexcept { return intervals_.empty(); }
  const Interval& operator[](std::size_t i) const { return intervals_[i]; }

 private:
  std::vector<Interval> intervals_;
};

/// Two columns "start end" per line, '#' comments allowed.
IntervalFamily read_family(std::istream& in);
void write_family(std::ostream& out, const IntervalFamily& family);

struct ConcentrationReport {
  double t_bar = 0.0;
  // Indices into the family, longest first.
  std::vector<std::size_t> selected;
  std::size_t K = 0;
  double eta = 0.0;
  std::size_t family_size = 0;
  // True when every pick had length ≥ η·(span of its run), the structural
  // property that guarantees the three invariants.
  bool structure_certified = true;
};

/// Runs the selection. Throws ValidationError on an empty family or
/// η ∉ (0, 1), and NumericalError if an output invariant fails (the family
/// then lacks the equal-mass partition structure).
ConcentrationReport concentrate(const IntervalFamily& family, double eta);

/// K ≥ −log(L)/(2 log(η/8)); zero for L ≤ 1.
double concentration_lower_bound(std::size_t family_size, double eta);

struct ReportCheck {
  bool pass = true;
  // Empty on success; otherwise "dyadic-decay", "distance" or "count".
  std::string violated;
  std::string detail;
};

/// Re-verifies a report against its family. Throws ValidationError when the
/// report references intervals outside the family.
ReportCheck check_report(const IntervalFamily& family, const ConcentrationReport& report);

void print_report(std::ostream& out, const IntervalFamily& family,
                  const ConcentrationReport& report);

}  // namespace nlsl
