#include "wordorder/transducer.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "wordorder/error.hpp"

namespace wordorder {
namespace {

constexpr int kGridPoints = 2048;

[[noreturn]] void non_monotone(const std::string& why) {
  throw Error("transducer", "NonMonotoneTransducer", why);
}

double parse_number(std::string_view text, std::string_view whole) {
  try {
    std::size_t used = 0;
    const std::string s(text);
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw Error("transducer", "InvalidTransducer",
                "cannot parse number in transducer '" + std::string(whole) + "'");
  }
}

}  // namespace

CostTransducer::CostTransducer(Kind kind, std::vector<double> params,
                               std::vector<std::pair<double, double>> knots)
    : kind_(kind), params_(std::move(params)), knots_(std::move(knots)) {}

CostTransducer CostTransducer::identity() { return {Kind::identity, {}}; }

CostTransducer CostTransducer::affine(double slope, double intercept) {
  if (slope == 0.0 || !std::isfinite(slope)) non_monotone("affine slope must be non-zero");
  return {Kind::affine, {slope, intercept}};
}

CostTransducer CostTransducer::power(double scale, double exponent) {
  if (scale == 0.0 || !(exponent > 0.0)) {
    non_monotone("power transducer needs scale != 0 and exponent > 0");
  }
  return {Kind::power, {scale, exponent}};
}

CostTransducer CostTransducer::exponential(double scale, double rate) {
  if (scale == 0.0 || rate == 0.0) non_monotone("exponential transducer needs scale*rate != 0");
  return {Kind::exponential, {scale, rate}};
}

CostTransducer CostTransducer::polynomial(std::vector<double> coefficients) {
  if (coefficients.size() < 2) non_monotone("polynomial transducer is constant");
  return {Kind::polynomial, std::move(coefficients)};
}

CostTransducer CostTransducer::tabulated(std::vector<std::pair<double, double>> knots) {
  if (knots.size() < 2) non_monotone("tabulated transducer needs at least two knots");
  std::sort(knots.begin(), knots.end());
  bool up = true;
  bool down = true;
  for (std::size_t j = 1; j < knots.size(); ++j) {
    if (!(knots[j].first > knots[j - 1].first)) non_monotone("duplicate tabulated knot");
    up = up && knots[j].second > knots[j - 1].second;
    down = down && knots[j].second < knots[j - 1].second;
  }
  if (!up && !down) non_monotone("tabulated values are not strictly monotone over their knots");
  return {Kind::tabulated, {}, std::move(knots)};
}

CostTransducer CostTransducer::parse(std::string_view text) {
  if (text == "identity") return identity();
  if (text == "square") return power(1.0, 2.0);
  if (text == "cube") return power(1.0, 3.0);
  if (text == "neg") return affine(-1.0, 0.0);
  if (text == "negexp") return exponential(1.0, -1.0);
  const auto colon = text.find(':');
  const auto head = text.substr(0, colon);
  if (colon != std::string_view::npos) {
    const auto rest = text.substr(colon + 1);
    if (head == "exp") {
      const double base = parse_number(rest, text);
      if (!(base > 0.0) || base == 1.0) non_monotone("exp base must be positive and != 1");
      return exponential(1.0, std::log(base));
    }
    if (head == "power") return power(1.0, parse_number(rest, text));
    if (head == "affine") {
      const auto second = rest.find(':');
      if (second == std::string_view::npos) {
        throw Error("transducer", "InvalidTransducer", "affine needs affine:<a>:<b>");
      }
      return affine(parse_number(rest.substr(0, second), text),
                    parse_number(rest.substr(second + 1), text));
    }
  }
  throw Error("transducer", "InvalidTransducer",
              "unknown transducer '" + std::string(text) + "'");
}

double CostTransducer::operator()(double x) const {
  switch (kind_) {
    case Kind::identity:
      return x;
    case Kind::affine:
      return params_[0] * x + params_[1];
    case Kind::power:
      return params_[0] * std::pow(std::max(x, 0.0), params_[1]);
    case Kind::exponential:
      return params_[0] * std::exp(params_[1] * x);
    case Kind::polynomial: {
      double acc = 0.0;
      for (auto it = params_.rbegin(); it != params_.rend(); ++it) acc = acc * x + *it;
      return acc;
    }
    case Kind::tabulated: {
      auto seg = std::upper_bound(knots_.begin(), knots_.end(), x,
                                  [](double v, const auto& k) { return v < k.first; });
      if (seg == knots_.begin()) ++seg;
      if (seg == knots_.end()) --seg;
      const auto& [x1, y1] = *seg;
      const auto& [x0, y0] = *std::prev(seg);
      return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
    }
  }
  return x;
}

Direction CostTransducer::direction(double domain_max) const {
  switch (kind_) {
    case Kind::identity:
      return Direction::increasing;
    case Kind::affine:
      return params_[0] > 0 ? Direction::increasing : Direction::decreasing;
    case Kind::power:
      return params_[0] > 0 ? Direction::increasing : Direction::decreasing;
    case Kind::exponential:
      return params_[0] * params_[1] > 0 ? Direction::increasing : Direction::decreasing;
    case Kind::tabulated:
      return knots_[1].second > knots_[0].second ? Direction::increasing
                                                 : Direction::decreasing;
    case Kind::polynomial:
      break;
  }
  // Polynomials: verify strict monotonicity on a dense grid of the domain.
  const double hi = domain_max > 0 ? domain_max : 1.0;
  bool up = true;
  bool down = true;
  double prev = (*this)(0.0);
  for (int k = 1; k <= kGridPoints; ++k) {
    const double v = (*this)(hi * k / kGridPoints);
    up = up && v > prev;
    down = down && v < prev;
    prev = v;
  }
  if (up) return Direction::increasing;
  if (down) return Direction::decreasing;
  non_monotone("polynomial transducer " + describe() + " is not strictly monotone on [0, " +
               std::to_string(hi) + "]");
}

void CostTransducer::require(Direction expected, double domain_max) const {
  if (direction(domain_max) != expected) {
    non_monotone("transducer " + describe() + " must be strictly " +
                 (expected == Direction::increasing ? "increasing" : "decreasing"));
  }
}

std::string CostTransducer::describe() const {
  std::ostringstream out;
  out.precision(6);
  switch (kind_) {
    case Kind::identity:
      return "identity";
    case Kind::affine:
      out << "affine(" << params_[0] << "," << params_[1] << ")";
      break;
    case Kind::power:
      out << "power(" << params_[0] << "," << params_[1] << ")";
      break;
    case Kind::exponential:
      out << "exponential(" << params_[0] << "," << params_[1] << ")";
      break;
    case Kind::polynomial:
      out << "polynomial(";
      for (std::size_t j = 0; j < params_.size(); ++j) out << (j ? "," : "") << params_[j];
      out << ")";
      break;
    case Kind::tabulated:
      out << "tabulated(" << knots_.size() << " knots)";
      break;
  }
  return out.str();
}

}  // namespace wordorder
