#pragma once

#include <cmath>
#include <optional>

#include "tdho/errors.hpp"
#include "tdho/field.hpp"
#include "tdho/spectral.hpp"
#include "tdho/zeta.hpp"

namespace tdho {

enum class NormKind { L2, Linf, L1, WeightedL2, FracSobolev, GalileanWeighted };

struct NormSpec {
  NormKind kind = NormKind::L2;
  double beta = 0.0;  // weight/regularity order
  double time = 0.0;  // evaluation time for GalileanWeighted

  static NormSpec l2() { return {NormKind::L2, 0.0, 0.0}; }
  static NormSpec linf() { return {NormKind::Linf, 0.0, 0.0}; }
  static NormSpec l1() { return {NormKind::L1, 0.0, 0.0}; }
  static NormSpec weighted_l2(double beta) { return {NormKind::WeightedL2, beta, 0.0}; }
  static NormSpec frac_sobolev(double s) { return {NormKind::FracSobolev, s, 0.0}; }
  static NormSpec galilean(double beta, double t) { return {NormKind::GalileanWeighted, beta, t}; }
};

// ||<x>^beta f||_2 on the current side's coordinates.
inline double weighted_l2_norm(const Field& f, double beta) {
  bool dual = f.gauge == Gauge::FrequencySide;
  double s = 0.0;
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    double w = std::pow(1.0 + f.grid.radius_sq(i, dual), 0.5 * beta);
    s += w * w * std::norm(f.values[i]);
  }
  return std::sqrt(s * f.cell_weight());
}

// |J(t)|^beta f realized as |zeta2|^beta M1 |nabla|^beta M1^{-1} f, with
// M1 = e^{i |x|^2 zeta2'/(2 zeta2)}. At t = 0 the conjugation degenerates to
// plain multiplication by |x|^beta (J(0) = x).
inline Field apply_galilean_power(const Field& f, double beta, double t,
                                  const ZetaSolution& zeta) {
  require(f.gauge != Gauge::FrequencySide, ErrorKind::ShapeMismatch,
          "|J|^beta acts on physical-side samples");
  if (beta == 0.0) return f;
  if (t == 0.0) {
    Field out = f;
    for (std::size_t i = 0; i < out.values.size(); ++i)
      out.values[i] *= std::pow(std::sqrt(out.grid.radius_sq(i, false)), beta);
    return out;
  }
  auto v = zeta.eval(t);
  require(v.z2 != 0.0, ErrorKind::ZeroZeta, "zeta2 vanishes at requested time");
  double rate = v.z2p / v.z2;
  Field g = chirp_rate(f, -rate);
  g = frac_derivative(g, beta);
  g = chirp_rate(g, rate);
  g *= std::pow(std::abs(v.z2), beta);
  return g;
}

// Norm dispatcher. GalileanWeighted(beta, t) is the combination
// ( ||f||_2^2 + || |J(t)|^beta f ||_2^2 )^{1/2}; for beta = 0 this is
// sqrt(2) ||f||_2 by construction.
inline double norm(const Field& f, const NormSpec& spec,
                   const ZetaSolution* zeta = nullptr) {
  switch (spec.kind) {
    case NormKind::L2:
      return f.norm_l2();
    case NormKind::Linf:
      return f.norm_linf();
    case NormKind::L1:
      return f.norm_l1();
    case NormKind::WeightedL2:
      return weighted_l2_norm(f, spec.beta);
    case NormKind::FracSobolev: {
      Field hat = f.gauge == Gauge::FrequencySide ? f : fourier(f, FourierDirection::Forward);
      return weighted_l2_norm(hat, spec.beta);
    }
    case NormKind::GalileanWeighted: {
      require(zeta != nullptr, ErrorKind::MissingZeta,
              "GalileanWeighted norm needs a ZetaSolution");
      double base = f.norm_l2();
      Field jf = apply_galilean_power(f, spec.beta, spec.time, *zeta);
      double top = jf.norm_l2();
      return std::sqrt(base * base + top * top);
    }
  }
  return 0.0;
}

}  // namespace tdho
