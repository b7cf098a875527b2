#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "cgfl/tensor.hpp"

namespace cgfl::testing {

// Central finite-difference gradient check. `forward` must rebuild the whole
// computation from the current parameter values and return a scalar loss.
// Returns the worst relative error across all parameter entries, where the
// denominator is floored at `floor_at` to keep near-zero gradients meaningful.
inline double fd_max_rel_error(std::vector<Tensor>& params,
                               const std::function<Tensor(Tape&)>& forward, double h = 1e-5,
                               double floor_at = 1e-6) {
  for (Tensor& p : params) {
    p.set_requires_grad(true);
    p.zero_grad();
  }
  Tape tape;
  Tensor loss = forward(tape);
  tape.backward(loss);

  std::vector<std::vector<double>> analytic;
  for (Tensor& p : params) analytic.push_back(p.grad());

  double worst = 0.0;
  for (std::size_t pi = 0; pi < params.size(); ++pi) {
    Tensor& p = params[pi];
    for (std::size_t k = 0; k < p.size(); ++k) {
      const double saved = p.data()[k];
      p.data()[k] = saved + h;
      Tape t1;
      const double up = forward(t1).item();
      p.data()[k] = saved - h;
      Tape t2;
      const double down = forward(t2).item();
      p.data()[k] = saved;
      const double numeric = (up - down) / (2.0 * h);
      const double denom = std::max({std::fabs(numeric), std::fabs(analytic[pi][k]), floor_at});
      worst = std::max(worst, std::fabs(numeric - analytic[pi][k]) / denom);
    }
  }
  for (Tensor& p : params) p.zero_grad();
  return worst;
}

inline bool approx_equal(double a, double b, double tol) { return std::fabs(a - b) <= tol; }

}  // namespace cgfl::testing
