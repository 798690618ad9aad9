#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "tdho/errors.hpp"

namespace tdho {

// Power-law fit value ~ c * t^(-mu) by least squares in log-log coordinates.
struct RateFit {
  double mu = 0.0;        // decay exponent (positive = decaying)
  double c = 0.0;         // prefactor
  double residual = 0.0;  // RMS of log residuals
  double t_lo = 0.0, t_hi = 0.0;
  std::size_t count = 0;
};

inline RateFit fit_power_law(const std::vector<double>& t, const std::vector<double>& value) {
  require(t.size() == value.size(), ErrorKind::InsufficientSamples, "mismatched sample arrays");
  require(t.size() >= 4, ErrorKind::InsufficientSamples, "need at least 4 samples");
  std::vector<double> lx(t.size()), ly(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    require(t[i] > 0.0 && value[i] > 0.0, ErrorKind::InsufficientSamples,
            "samples must be positive");
    if (i > 0)
      require(t[i] > t[i - 1], ErrorKind::InsufficientSamples, "t must be strictly increasing");
    lx[i] = std::log(t[i]);
    ly[i] = std::log(value[i]);
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(t.size());
  my /= static_cast<double>(t.size());
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  require(sxx > 0.0, ErrorKind::FitFailed, "degenerate abscissa");
  double slope = sxy / sxx;
  RateFit fit;
  fit.mu = -slope;
  fit.c = std::exp(my - slope * mx);
  fit.t_lo = t.front();
  fit.t_hi = t.back();
  fit.count = t.size();
  double ss = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    double r = ly[i] - (my + slope * (lx[i] - mx));
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / static_cast<double>(t.size()));
  return fit;
}

// Restrict samples to [t_lo, t_hi] before fitting.
inline RateFit fit_power_law_window(const std::vector<double>& t, const std::vector<double>& value,
                                    double t_lo, double t_hi, std::size_t min_points = 6) {
  std::vector<double> ts, vs;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] >= t_lo && t[i] <= t_hi && value[i] > 0.0) {
      ts.push_back(t[i]);
      vs.push_back(value[i]);
    }
  }
  require(ts.size() >= min_points, ErrorKind::InsufficientSamples,
          "too few samples in fit window");
  return fit_power_law(ts, vs);
}

}  // namespace tdho
