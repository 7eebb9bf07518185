#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bsrd/diagnostics.hpp"
#include "bsrd/stepper.hpp"

namespace bsrd {

struct RunOptions {
  double t_final = 0.0;
  /// Keep every n-th step's record in the result (the final step is always kept).
  std::size_t record_every = 1;
  /// Called for every accepted step, including the initial state at step 0.
  std::function<void(std::size_t step, const State&, const DiagnosticsRecord&)> observer;
  /// Stop early once this predicate holds.
  std::function<bool(const State&, const DiagnosticsRecord&)> stop_when;
};

struct RunFailure {
  double t = 0.0;
  int iterations = 0;
  double residual = 0.0;
  std::string message;
};

struct RunResult {
  State final_state;  // last good state
  std::vector<DiagnosticsRecord> records;
  std::size_t steps = 0;
  std::optional<RunFailure> failure;
  [[nodiscard]] bool ok() const { return !failure.has_value(); }
};

/// Advances on the uniform grid t0 + n dt (last step shortened to land on
/// t_final). Halving retries are delegated to TimeStepper::advance; a step
/// that still fails ends the run with the last good state.
inline RunResult run(TimeStepper& stepper, const State& initial, const RunOptions& opts) {
  const Problem& p = stepper.problem();
  const double dt = stepper.config().dt;
  RunResult result;
  result.final_state = initial;

  auto emit = [&](std::size_t n, const State& s, bool force) {
    const DiagnosticsRecord rec = record(s, p);
    if (opts.observer) opts.observer(n, s, rec);
    if (force || opts.record_every <= 1 || n % opts.record_every == 0) result.records.push_back(rec);
    return rec;
  };

  const double span = opts.t_final - initial.t;
  const auto total =
      span > 0.0 ? static_cast<std::size_t>(std::ceil(span / dt - 1e-9)) : std::size_t{0};
  auto rec = emit(0, initial, true);
  if (opts.stop_when && opts.stop_when(initial, rec)) return result;

  State current = initial;
  for (std::size_t n = 1; n <= total; ++n) {
    const double t_next = n == total ? opts.t_final : initial.t + static_cast<double>(n) * dt;
    try {
      State next = stepper.advance(current, t_next - current.t);
      next.t = t_next;
      current = std::move(next);
    } catch (const NonConvergence& e) {
      result.failure = RunFailure{current.t, e.iterations(), e.residual(), e.what()};
      break;
    }
    result.steps = n;
    result.final_state = current;
    rec = emit(n, current, n == total);
    if (opts.stop_when && opts.stop_when(current, rec)) {
      if (result.records.empty() || result.records.back().t != rec.t) result.records.push_back(rec);
      break;
    }
  }
  return result;
}

}  // namespace bsrd
