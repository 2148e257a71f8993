#include "nlsl/bourgain.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace nlsl {
namespace {

constexpr double kBoundSlack = 1e-12;

double distance_to(double t, const Interval& j) {
  if (t < j.start) return j.start - t;
  if (t > j.end) return t - j.end;
  return 0.0;
}

struct Run {
  std::size_t lo = 0;
  std::size_t hi = 0;  // exclusive
  std::size_t count() const { return hi - lo; }
};

}  // namespace

IntervalFamily::IntervalFamily(std::vector<Interval> intervals) : intervals_(std::move(intervals)) {
  for (std::size_t i = 0; i < intervals_.size(); ++i) {
    const Interval& j = intervals_[i];
    if (!std::isfinite(j.start) || !std::isfinite(j.end) || !(j.end > j.start)) {
      throw ValidationError("bourgain", "interval " + std::to_string(i) +
                                            " must have finite endpoints and positive length");
    }
    if (i > 0 && j.start < intervals_[i - 1].end) {
      throw ValidationError("bourgain", "intervals " + std::to_string(i - 1) + " and " +
                                            std::to_string(i) +
                                            " overlap or are not sorted by start");
    }
  }
}

IntervalFamily read_family(std::istream& in) {
  std::vector<Interval> intervals;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    double a = 0.0;
    double b = 0.0;
    if (!(fields >> a)) continue;  // blank line
    std::string rest;
    if (!(fields >> b) || (fields >> rest)) {
      throw ValidationError("bourgain", "line " + std::to_string(line_no) +
                                            ": expected two numbers 'start end'");
    }
    intervals.push_back({a, b, static_cast<long>(intervals.size())});
  }
  return IntervalFamily(std::move(intervals));
}

void write_family(std::ostream& out, const IntervalFamily& family) {
  char buf[64];
  for (const Interval& j : family.intervals()) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g\n", j.start, j.end);
    out << buf;
  }
}

double concentration_lower_bound(std::size_t family_size, double eta) {
  if (family_size <= 1) return 0.0;
  return -std::log(static_cast<double>(family_size)) / (2.0 * std::log(eta / 8.0));
}

ConcentrationReport concentrate(const IntervalFamily& family, double eta) {
  if (family.empty()) throw ValidationError("bourgain", "concentrate needs a non-empty family");
  if (!(eta > 0.0 && eta < 1.0)) throw ValidationError("bourgain", "eta must lie in (0, 1)");

  const auto& js = family.intervals();
  const double stop_count = 100.0 / eta;

  ConcentrationReport report;
  report.eta = eta;
  report.family_size = js.size();

  Run run{0, js.size()};
  while (true) {
    std::size_t pick = run.lo;
    for (std::size_t i = run.lo + 1; i < run.hi; ++i) {
      if (js[i].length() > js[pick].length()) pick = i;
    }
    const double span = js[run.hi - 1].end - js[run.lo].start;
    if (js[pick].length() < eta * span) report.structure_certified = false;
    report.selected.push_back(pick);

    const double threshold = 0.5 * js[pick].length();
    std::size_t survivors = 0;
    Run best{};
    Run current{run.lo, run.lo};
    for (std::size_t i = run.lo; i < run.hi; ++i) {
      if (js[i].length() >= threshold) {
        current = {i + 1, i + 1};
        continue;
      }
      ++survivors;
      current.hi = i + 1;
      if (current.count() > best.count()) best = current;
    }
    if (static_cast<double>(survivors) <= stop_count) break;
    run = best;
  }

  std::stable_sort(report.selected.begin(), report.selected.end(),
                   [&](std::size_t a, std::size_t b) { return js[a].length() > js[b].length(); });
  report.K = report.selected.size();
  const Interval& last = js[report.selected.back()];
  report.t_bar = 0.5 * (last.start + last.end);

  // Output invariants, asserted rather than assumed.
  for (std::size_t k = 0; k + 1 < report.K; ++k) {
    if (!(js[report.selected[k]].length() >= 2.0 * js[report.selected[k + 1]].length())) {
      throw NumericalError("concentrate: dyadic decay failed between picks " + std::to_string(k) +
                           " and " + std::to_string(k + 1));
    }
  }
  for (std::size_t k = 0; k < report.K; ++k) {
    const Interval& j = js[report.selected[k]];
    if (distance_to(report.t_bar, j) > j.length() / eta) {
      throw NumericalError("concentrate: t_bar is farther than |J|/eta from pick " +
                           std::to_string(k) +
                           "; the family lacks the equal-mass partition structure");
    }
  }
  const double bound = concentration_lower_bound(js.size(), eta);
  if (static_cast<double>(report.K) < bound * (1.0 - kBoundSlack)) {
    std::ostringstream msg;
    msg << "concentrate: K = " << report.K << " is below the guaranteed " << bound
        << "; the family lacks the equal-mass partition structure";
    throw NumericalError(msg.str());
  }
  return report;
}

ReportCheck check_report(const IntervalFamily& family, const ConcentrationReport& report) {
  const auto& js = family.intervals();
  for (std::size_t idx : report.selected) {
    if (idx >= js.size()) {
      throw ValidationError("bourgain", "report references interval " + std::to_string(idx) +
                                            " outside a family of " + std::to_string(js.size()));
    }
  }
  ReportCheck out;
  auto fail = [&](std::string what, std::string detail) {
    out.pass = false;
    out.violated = std::move(what);
    out.detail = std::move(detail);
    return out;
  };
  if (report.selected.empty() || report.K != report.selected.size()) {
    return fail("count", "K does not match the number of selected intervals");
  }
  if (!(report.eta > 0.0 && report.eta < 1.0)) return fail("count", "eta outside (0, 1)");

  for (std::size_t k = 1; k < report.selected.size(); ++k) {
    const double prev = js[report.selected[k - 1]].end - js[report.selected[k - 1]].start;
    const double cur = js[report.selected[k]].end - js[report.selected[k]].start;
    if (prev < 2.0 * cur) {
      std::ostringstream d;
      d << "|J_" << k << "| = " << prev << " < 2|J_" << k + 1 << "| = " << 2.0 * cur;
      return fail("dyadic-decay", d.str());
    }
  }
  for (std::size_t k = 0; k < report.selected.size(); ++k) {
    const Interval& j = js[report.selected[k]];
    const double gap = std::max({0.0, j.start - report.t_bar, report.t_bar - j.end});
    const double allowed = (j.end - j.start) / report.eta;
    if (gap > allowed) {
      std::ostringstream d;
      d << "dist(t_bar, J_" << k + 1 << ") = " << gap << " > |J|/eta = " << allowed;
      return fail("distance", d.str());
    }
  }
  if (js.size() > 1) {
    const double needed =
        std::log(static_cast<double>(js.size())) / (2.0 * std::log(8.0 / report.eta));
    if (static_cast<double>(report.K) < needed * (1.0 - kBoundSlack)) {
      std::ostringstream d;
      d << "K = " << report.K << " < " << needed;
      return fail("count", d.str());
    }
  }
  return out;
}

void print_report(std::ostream& out, const IntervalFamily& family,
                  const ConcentrationReport& report) {
  char buf[160];
  out << "L = " << report.family_size << "\n";
  std::snprintf(buf, sizeof buf, "eta = %.17g\n", report.eta);
  out << buf;
  out << "K = " << report.K << "\n";
  std::snprintf(buf, sizeof buf, "K_lower_bound = %.17g\n",
                concentration_lower_bound(report.family_size, report.eta));
  out << buf;
  std::snprintf(buf, sizeof buf, "t_bar = %.17g\n", report.t_bar);
  out << buf;
  out << "structure_certified = " << (report.structure_certified ? "yes" : "no") << "\n";
  for (std::size_t k = 0; k < report.selected.size(); ++k) {
    const Interval& j = family[report.selected[k]];
    std::snprintf(buf, sizeof buf, "J_%zu = [%.17g, %.17g] index=%zu length=%.17g\n", k + 1,
                  j.start, j.end, report.selected[k], j.length());
    out << buf;
  }
}

}  // namespace nlsl
