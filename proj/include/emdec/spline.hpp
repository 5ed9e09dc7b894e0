#pragma once

#include <vector>

#include "emdec/errors.hpp"

namespace emdec {

/// Natural cubic spline: second derivative zero at the outermost knots.
/// Two knots degenerate to a straight line. Knot abscissae must be strictly
/// increasing.
class CubicSpline {
 public:
  CubicSpline(std::vector<double> x, std::vector<double> y);

  double operator()(double t) const;
  std::size_t knot_count() const { return x_.size(); }

 private:
  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<double> m_;  // second derivatives at the knots
};

}  // namespace emdec
