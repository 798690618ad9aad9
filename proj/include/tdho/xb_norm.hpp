#pragma once

#include <cmath>
#include <vector>

#include "tdho/errors.hpp"

namespace tdho {

// One trajectory sample carrying both norms the contraction space weighs.
struct WeightedSample {
  double t = 0.0;
  double l2 = 0.0;        // ||phi(t)||_2
  double weighted = 0.0;  // ||U(0,t) phi(t)||_{H^{0,beta}}
};

// Discrete sup over samples of
//   |t|^{beta (1-2 lambda)/2 + b} ||phi(t)||_2 + |t|^b ||U(0,t) phi(t)||_{H^{0,beta}}
// on t <= -r0.
inline double xb_norm(const std::vector<WeightedSample>& samples, double beta, double b,
                      double lambda, double r0) {
  require(!samples.empty(), ErrorKind::InsufficientSamples, "empty trajectory");
  double sup = 0.0;
  for (const auto& s : samples) {
    require(s.t <= -r0 * (1.0 - 1e-12), ErrorKind::OutsideValidity,
            "X_b norm is defined on t <= -r0");
    require(std::isfinite(s.weighted), ErrorKind::MissingWeightedNorms,
            "trajectory sample lacks the weighted norm");
    double at = std::abs(s.t);
    double v = std::pow(at, 0.5 * beta * (1.0 - 2.0 * lambda) + b) * s.l2 +
               std::pow(at, b) * s.weighted;
    sup = std::max(sup, v);
  }
  return sup;
}

}  // namespace tdho
