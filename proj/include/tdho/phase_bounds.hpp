#pragma once

#include <cmath>
#include <complex>

#include "tdho/errors.hpp"
#include "tdho/field.hpp"

namespace tdho {

// The scalar building blocks of the phase-correction estimates:
//   A_n(t; z) = ( |z|^{p_c - n} - (t^{-chi} + |z|^2)^{(p_c - n)/2} ) z^n
//   B_n(t; z) = (t^{-chi} + |z|^2)^{(p_c - n)/2} z^n
//   ~B_n(t; z) = (t^{-chi} + |z|^2)^{(p_c - n)/2} |z|^n
// probed by the Monte-Carlo inequality suite:
//   |A_n| <= C t^{-p_c chi/2}        (p_c in (0,2))
//   |B_n(z) - B_n(w)| <= C |z-w|^{p_c},  |A_0 z| <= t^{-p_c chi} |z|^{1-p_c}
//                                     (p_c in (0,1))
struct ModPhaseValues {
  Complex A_n;
  Complex B_n;
  double B_n_tilde = 0.0;
};

inline ModPhaseValues mod_phase_bounds(double t, double chi, double p_c, Complex z, int n) {
  require(t >= 1.0, ErrorKind::DomainError, "t must be >= 1");
  require(chi > 0.0, ErrorKind::DomainError, "chi must be positive");
  require(p_c > 0.0 && p_c < 2.0, ErrorKind::DomainError,
          "p_c must lie in (0, 2) for the phase bounds");
  require(n >= 0, ErrorKind::DomainError, "n must be >= 0");
  double az = std::abs(z);
  double reg = std::pow(t, -chi) + az * az;
  double reg_pow = std::pow(reg, 0.5 * (p_c - n));
  // |z|^{p_c - n} z^n = |z|^{p_c} (z/|z|)^n extends by 0 to z = 0 (p_c > 0)
  Complex phase_n(1.0, 0.0);
  if (az > 0.0) phase_n = std::pow(z / az, n);
  Complex zn = std::pow(az, n) * phase_n;
  ModPhaseValues out;
  Complex lead = az > 0.0 ? std::pow(az, p_c) * phase_n : Complex(0.0, 0.0);
  out.A_n = lead - reg_pow * zn;
  out.B_n = reg_pow * zn;
  out.B_n_tilde = reg_pow * std::pow(az, n);
  return out;
}

}  // namespace tdho
