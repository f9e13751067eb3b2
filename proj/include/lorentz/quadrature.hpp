#pragma once

#include <vector>

namespace lorentz {

/// Gauss-Legendre nodes and weights on [-1, 1].
class GaussLegendre {
 public:
  explicit GaussLegendre(int n);

  int size() const { return static_cast<int>(nodes_.size()); }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }

  /// Integral of f over [a, b].
  template <class F>
  double integrate(double a, double b, F&& f) const {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double acc = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) acc += weights_[i] * f(mid + half * nodes_[i]);
    return half * acc;
  }

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

template <class F>
double composite_integral(const GaussLegendre& rule, double a, double b, int panels, F&& f) {
  const double h = (b - a) / panels;
  double acc = 0.0;
  for (int k = 0; k < panels; ++k) acc += rule.integrate(a + k * h, a + (k + 1) * h, f);
  return acc;
}

}  // namespace lorentz
