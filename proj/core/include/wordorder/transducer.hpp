#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace wordorder {

enum class Direction { increasing, decreasing };

/// Strictly monotone map from an information quantity (bits) or an edge
/// length into an abstract energetic cost.
///
/// Kinds and their parameters:
///   identity                  g(x) = x
///   affine      {a, b}        g(x) = a*x + b,          a != 0
///   power       {c, p}        g(x) = c * x^p,          c != 0, p > 0, x >= 0
///   exponential {c, k}        g(x) = c * exp(k*x),     c*k != 0
///   polynomial  {c0, c1, ..}  g(x) = sum c_j x^j       (checked numerically)
///   tabulated   knots         piecewise linear through (x_j, y_j), extended
///                             linearly past the end knots
class CostTransducer {
 public:
  enum class Kind { identity, affine, power, exponential, polynomial, tabulated };

  static CostTransducer identity();
  static CostTransducer affine(double slope, double intercept);
  static CostTransducer power(double scale, double exponent);
  static CostTransducer exponential(double scale, double rate);
  static CostTransducer polynomial(std::vector<double> coefficients);
  static CostTransducer tabulated(std::vector<std::pair<double, double>> knots);

  /// Parses "identity", "square", "cube", "exp:<base>", "affine:<a>:<b>",
  /// "power:<p>", "neg" (g(x) = -x) and "negexp" (g(x) = exp(-x)).
  static CostTransducer parse(std::string_view text);

  double operator()(double x) const;

  Kind kind() const noexcept { return kind_; }
  const std::vector<double>& parameters() const noexcept { return params_; }

  /// Monotonicity direction; throws NonMonotoneTransducer when the map is not
  /// strictly monotone on [0, domain_max].
  Direction direction(double domain_max) const;

  /// Throws unless strictly monotone in `expected` direction on [0, domain_max].
  void require(Direction expected, double domain_max) const;

  std::string describe() const;

 private:
  CostTransducer(Kind kind, std::vector<double> params,
                 std::vector<std::pair<double, double>> knots = {});

  Kind kind_;
  std::vector<double> params_;
  std::vector<std::pair<double, double>> knots_;
};

}  // namespace wordorder
