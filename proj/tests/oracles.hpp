// Independent oracles used by the tests. These re-derive results through
// routes separate from the library implementation: scalar loops instead of
// the production recursions, QR instead of normal equations, and a
// linear-interpolation integrator on a 10x finer grid for Mackey-Glass.
#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "rcdelay/common.hpp"

namespace oracles {

// NARMA10 brute force: explicit lag loop, same arithmetic order as stated
// (ascending i in the ten-lag sum).
inline std::vector<double> narma10(const std::vector<double>& u,
                                   std::size_t out_len) {
  std::vector<double> q(out_len, 0.0);
  for (std::size_t n = 0; n + 1 < out_len; ++n) {
    double lag_sum = 0.0;
    for (int i = 0; i <= 9; ++i) {
      lag_sum += (static_cast<long>(n) - i) >= 0 ? q[n - i] : 0.0;
    }
    const double u_n = n < u.size() ? u[n] : 0.0;
    const double u_n9 = n >= 9 ? u[n - 9] : 0.0;
    q[n + 1] = 0.3 * q[n] + 0.05 * q[n] * lag_sum + 1.5 * u_n9 * u_n + 0.1;
  }
  return q;
}

// One ring update evaluated node by node straight from the update equations.
inline Eigen::VectorXd ring_step(const Eigen::VectorXd& current,
                                 const Eigen::VectorXd& previous,
                                 const Eigen::VectorXd& drive, double alpha,
                                 bool sine) {
  const long n = current.size();
  Eigen::VectorXd next(n);
  for (long i = 0; i < n; ++i) {
    const double feedback =
        i == 0 ? alpha * previous[n - 1] : alpha * current[i - 1];
    const double v = feedback + drive[i];
    next[i] = sine ? std::sin(v) : v;
  }
  return next;
}

// Least squares through an orthogonal factorization (not normal equations).
inline Eigen::MatrixXd least_squares_qr(const Eigen::MatrixXd& x,
                                        const Eigen::MatrixXd& y) {
  return x.colPivHouseholderQr().solve(y);
}

// Mackey-Glass reference trajectory: RK4 on a `substeps`-per-sample grid with
// *linear* interpolation of the delayed term and a plain history vector.
inline std::vector<double> mackey_glass(long n_samples, int substeps,
                                        double history, double beta = 0.2,
                                        double tau = 17.0, double expo = 10.0,
                                        double gamma = 0.1, double dt = 1.0) {
  const double h = dt / substeps;
  const long n_fine = (n_samples - 1) * substeps;
  const double delay = tau / h;
  std::vector<double> x(n_fine + 1);
  x[0] = history;
  auto f = [&](double v, double vd) {
    return beta * vd / (1.0 + std::pow(vd, expo)) - gamma * v;
  };
  auto lag = [&](double idx) {
    if (idx <= 0.0) return history;
    const long i = static_cast<long>(idx);
    const double t = idx - i;
    return t == 0.0 ? x[i] : (1.0 - t) * x[i] + t * x[i + 1];
  };
  for (long j = 0; j < n_fine; ++j) {
    const double a = lag(j - delay);
    const double b = lag(j + 0.5 - delay);
    const double c = lag(j + 1.0 - delay);
    const double k1 = f(x[j], a);
    const double k2 = f(x[j] + 0.5 * h * k1, b);
    const double k3 = f(x[j] + 0.5 * h * k2, b);
    const double k4 = f(x[j] + h * k3, c);
    x[j + 1] = x[j] + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  std::vector<double> samples(n_samples);
  for (long n = 0; n < n_samples; ++n) samples[n] = x[n * substeps];
  return samples;
}

}  // namespace oracles
