#include "rcdelay/reservoir.hpp"

#include <cmath>
#include <cstdio>

#include "rcdelay/rng.hpp"

namespace rcdelay {

namespace {

inline double activate(double v, Nonlinearity f) {
  switch (f) {
    case Nonlinearity::Sine:
      return std::sin(v);
    case Nonlinearity::Tanh:
      return std::tanh(v);
    case Nonlinearity::Identity:
      return v;
  }
  return v;
}

}  // namespace

void ReservoirParams::validate() const {
  require(n_nodes >= 1, "reservoir: n_nodes must be >= 1");
  require(feedback_alpha >= 0.0, "reservoir: feedback_alpha must be >= 0");
}

ReservoirState initial_reservoir_state(const ReservoirParams& params) {
  params.validate();
  ReservoirState s;
  s.current = Eigen::VectorXd::Zero(params.n_nodes);
  s.previous = Eigen::VectorXd::Zero(params.n_nodes);
  if (params.initial_state.kind == InitialState::Kind::SeededUniform) {
    Rng rng(params.initial_state.seed);
    for (int i = 0; i < params.n_nodes; ++i) s.current[i] = rng.uniform(-1, 1);
    for (int i = 0; i < params.n_nodes; ++i) s.previous[i] = rng.uniform(-1, 1);
  }
  return s;
}

ReservoirState step(const ReservoirState& state,
                    Eigen::Ref<const Eigen::VectorXd> drive,
                    const ReservoirParams& params) {
  params.validate();
  const long n = params.n_nodes;
  require(state.current.size() == n && state.previous.size() == n,
          "reservoir: state size does not match n_nodes");
  require(drive.size() == n, "reservoir: drive size does not match n_nodes");

  ReservoirState next;
  next.current.resize(n);
  const double alpha = params.feedback_alpha;
  const Nonlinearity f = params.nonlinearity;
  next.current[0] = activate(alpha * state.previous[n - 1] + drive[0], f);
  for (long i = 1; i < n; ++i) {
    next.current[i] = activate(alpha * state.current[i - 1] + drive[i], f);
  }
  next.previous = state.current;
  next.step_index = state.step_index + 1;
  return next;
}

StateMatrix run(const DriveMatrix& drive, const ReservoirParams& params,
                long washout) {
  params.validate();
  const long steps = drive.rows();
  require(steps > 0, "reservoir: empty drive sequence");
  require(drive.cols() == params.n_nodes,
          "reservoir: drive width does not match n_nodes");
  require(washout >= 0 && washout < steps,
          "reservoir: washout must be < number of driven timesteps");
  if (params.feedback_alpha > 1.0) {
    std::fprintf(stderr,
                 "rcdelay: warning: feedback_alpha=%g > 1 is non-contractive; "
                 "the echo-state property is not guaranteed\n",
                 params.feedback_alpha);
  }

  const long n = params.n_nodes;
  const double alpha = params.feedback_alpha;
  const Nonlinearity f = params.nonlinearity;

  ReservoirState init = initial_reservoir_state(params);
  Eigen::VectorXd prev = std::move(init.previous);
  Eigen::VectorXd cur = std::move(init.current);
  Eigen::VectorXd next(n);

  StateMatrix out;
  out.data.resize(steps - washout, n);
  out.timestep_offset = washout;

  for (long t = 0; t < steps; ++t) {
    next[0] = activate(alpha * prev[n - 1] + drive(t, 0), f);
    for (long i = 1; i < n; ++i) {
      next[i] = activate(alpha * cur[i - 1] + drive(t, i), f);
    }
    prev.swap(cur);
    cur.swap(next);
    if (t >= washout) out.data.row(t - washout) = cur;
  }
  return out;
}

}  // namespace rcdelay
