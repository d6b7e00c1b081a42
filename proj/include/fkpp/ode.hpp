#pragma once

// Adaptive Dormand-Prince integration helpers (Boost.Odeint backend) with
// exact landing on requested abscissae and sign-change event location.

#include <cmath>
#include <optional>
#include <string>

#include <boost/numeric/odeint.hpp>

#include "fkpp/error.hpp"

namespace fkpp::ode {

struct Tolerance {
  double abs = 1e-12;
  double rel = 1e-12;
};

template <class State>
struct EventHit {
  double t;
  State state;
};

namespace detail {
template <class State>
using Stepper = boost::numeric::odeint::runge_kutta_dopri5<State>;
}

// Advances `state` from t0 to t1 (either direction) with adaptive steps
// that land exactly on t1. Throws NumericalError on step-size underflow.
template <class State, class System>
void integrate_to(System&& sys, State& state, double t0, double t1,
                  Tolerance tol, double initial_step = 1e-3) {
  namespace odeint = boost::numeric::odeint;
  if (t0 == t1) return;
  auto stepper = odeint::make_controlled(tol.abs, tol.rel, detail::Stepper<State>());
  const double dir = t1 > t0 ? 1.0 : -1.0;
  double t = t0;
  double dt = dir * std::min(std::abs(initial_step), std::abs(t1 - t0));
  int rejected = 0;
  while (dir * (t1 - t) > 0.0) {
    if (dir * (t + dt - t1) > 0.0) dt = t1 - t;
    const double t_before = t;
    const double dt_try = dt;
    const auto result = stepper.try_step(sys, state, t, dt);
    if (result == odeint::success) {
      rejected = 0;
      // Snap the last step so t equals t1 bit-exactly.
      if (dt_try == t1 - t_before) t = t1;
    } else if (++rejected > 500 || std::abs(dt) < 1e-14 * std::max(1.0, std::abs(t))) {
      throw NumericalError("ode: step size underflow near t = " + std::to_string(t));
    }
  }
}

// Integrates forward from t0 until event(state) changes sign or t_max is
// reached. The event time is located on the dense output by bisection and
// then polished by re-integrating onto it. Returns nullopt if no sign change.
template <class State, class System, class Event>
std::optional<EventHit<State>> find_event(System&& sys, const State& x0, double t0,
                                          double t_max, Event&& event,
                                          Tolerance tol, double initial_step = 1e-3) {
  namespace odeint = boost::numeric::odeint;
  auto dense = odeint::make_dense_output(tol.abs, tol.rel, detail::Stepper<State>());
  dense.initialize(x0, t0, initial_step);
  const double g0 = event(x0);
  if (g0 == 0.0) return EventHit<State>{t0, x0};
  State probe = x0;
  int guard = 0;
  while (dense.current_time() < t_max) {
    const auto [ta, tb] = dense.do_step(sys);
    if (++guard > 50'000'000) throw NumericalError("ode: too many steps");
    if (!(tb > ta)) throw NumericalError("ode: step size underflow");
    const double gb = event(dense.current_state());
    if ((gb > 0.0) == (g0 > 0.0) && gb != 0.0) continue;
    double lo = ta;
    double hi = std::min(tb, t_max);
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
      const double mid = 0.5 * (lo + hi);
      dense.calc_state(mid, probe);
      const double gm = event(probe);
      if ((gm > 0.0) == (g0 > 0.0) && gm != 0.0) lo = mid; else hi = mid;
    }
    EventHit<State> hit{hi, x0};
    integrate_to(sys, hit.state, t0, hit.t, tol, initial_step);
    return hit;
  }
  return std::nullopt;
}

}  // namespace fkpp::ode
