#pragma once

// Thin wrapper over Boost.Odeint's dense-output Dormand-Prince 5(4).

#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "optosqueeze/errors.hpp"

namespace optosqueeze::ode {

struct Tolerance {
  double rel = 1e-9;
  double abs = 1e-12;
};

/// Integrates x' = rhs(x, t) from times.front() to times.back(), calling
/// obs(x, t) at each requested time (the first one included). `times` must be
/// increasing. rhs may throw to abort (divergence guards do this).
template <std::size_t N, class Rhs, class Obs>
void integrate_at(Rhs&& rhs, std::array<double, N>& x, const std::vector<double>& times,
                  const Tolerance& tol, Obs&& obs, double dt0 = 1e-3) {
  namespace odeint = boost::numeric::odeint;
  using State = std::array<double, N>;
  if (times.size() < 2) {
    if (!times.empty()) obs(x, times.front());
    return;
  }
  auto stepper = odeint::make_dense_output(tol.abs, tol.rel, odeint::runge_kutta_dopri5<State>());
  auto system = [&rhs](const State& s, State& ds, double t) { rhs(s, ds, t); };
  auto observer = [&obs](const State& s, double t) { obs(s, t); };
  const double span = times.back() - times.front();
  const double dt = std::min(dt0, span);
  try {
    odeint::integrate_times(stepper, system, x, times.begin(), times.end(), dt, observer,
                            odeint::max_step_checker(1000000));
  } catch (const odeint::odeint_error& e) {
    throw ConvergenceError(std::string("ODE integration failed: ") + e.what());
  }
}

/// Convenience: uniform grid of `count` intervals on [t0, t1].
inline std::vector<double> uniform_times(double t0, double t1, std::size_t count) {
  std::vector<double> t(count + 1);
  for (std::size_t k = 0; k <= count; ++k) {
    t[k] = t0 + (t1 - t0) * static_cast<double>(k) / static_cast<double>(count);
  }
  t.back() = t1;
  return t;
}

}  // namespace optosqueeze::ode
