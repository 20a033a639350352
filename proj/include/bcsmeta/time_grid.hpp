#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "bcsmeta/errors.hpp"

namespace bcsmeta {

enum class GridScale { Linear, Log };

/// count points from t_min to t_max inclusive.
inline std::vector<double> time_grid(double t_min, double t_max, int count, GridScale scale) {
  if (count < 2) throw DomainError("time grid needs at least 2 points");
  if (!(t_min < t_max)) throw DomainError("time grid needs t_min < t_max");
  if (!(t_min >= 0.0)) throw DomainError("time grid needs t_min >= 0");
  if (scale == GridScale::Log && !(t_min > 0.0)) {
    throw DomainError("logarithmic time grid needs t_min > 0");
  }
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double s = static_cast<double>(i) / (count - 1);
    out[i] = scale == GridScale::Linear ? t_min + s * (t_max - t_min)
                                        : t_min * std::pow(t_max / t_min, s);
  }
  out.back() = t_max;
  return out;
}

}  // namespace bcsmeta
