#include <gtest/gtest.h>

#include <cmath>
#include <functional>

#include "wordorder/error.hpp"
#include "wordorder/transducer.hpp"

using namespace wordorder;

namespace {

std::string code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return "";
}

}  // namespace

TEST(Transducer, Values) {
  EXPECT_DOUBLE_EQ(CostTransducer::identity()(2.5), 2.5);
  EXPECT_DOUBLE_EQ(CostTransducer::affine(2.0, 1.0)(3.0), 7.0);
  EXPECT_DOUBLE_EQ(CostTransducer::power(1.0, 2.0)(3.0), 9.0);
  EXPECT_DOUBLE_EQ(CostTransducer::polynomial({0.0, 2.0, 0.0, 1.0})(2.0), 12.0);
  EXPECT_NEAR(CostTransducer::exponential(1.0, -1.0)(1.0), std::exp(-1.0), 1e-15);
  const auto t = CostTransducer::tabulated({{0.0, 0.0}, {1.0, 2.0}, {2.0, 3.0}});
  EXPECT_DOUBLE_EQ(t(0.5), 1.0);
  EXPECT_DOUBLE_EQ(t(1.5), 2.5);
}

TEST(Transducer, Directions) {
  EXPECT_EQ(CostTransducer::identity().direction(4.0), Direction::increasing);
  EXPECT_EQ(CostTransducer::exponential(1.0, -1.0).direction(4.0), Direction::decreasing);
  EXPECT_EQ(CostTransducer::affine(-2.0, 0.0).direction(4.0), Direction::decreasing);
  EXPECT_EQ(CostTransducer::tabulated({{0, 5}, {1, 3}, {2, 0}}).direction(2.0), Direction::decreasing);
}

TEST(Transducer, RejectsNonMonotone) {
  EXPECT_EQ(code_of([] { CostTransducer::affine(0.0, 1.0); }), "transducer.NonMonotoneTransducer");
  EXPECT_EQ(code_of([] { CostTransducer::tabulated({{0, 0}, {1, 2}, {2, 1}}); }),
            "transducer.NonMonotoneTransducer");
  // x^2 - 2x turns around at 1.
  EXPECT_EQ(code_of([] { CostTransducer::polynomial({0.0, -2.0, 1.0}).direction(3.0); }),
            "transducer.NonMonotoneTransducer");
  EXPECT_EQ(code_of([] { CostTransducer::identity().require(Direction::decreasing, 1.0); }),
            "transducer.NonMonotoneTransducer");
}

TEST(Transducer, Parse) {
  EXPECT_DOUBLE_EQ(CostTransducer::parse("square")(3.0), 9.0);
  EXPECT_DOUBLE_EQ(CostTransducer::parse("cube")(2.0), 8.0);
  EXPECT_NEAR(CostTransducer::parse("exp:2")(3.0), 8.0, 1e-12);
  EXPECT_DOUBLE_EQ(CostTransducer::parse("power:1.5")(4.0), 8.0);
  EXPECT_DOUBLE_EQ(CostTransducer::parse("affine:2:1")(1.0), 3.0);
  EXPECT_EQ(CostTransducer::parse("negexp").direction(1.0), Direction::decreasing);
  EXPECT_EQ(code_of([] { CostTransducer::parse("bogus"); }), "transducer.InvalidTransducer");
  EXPECT_EQ(code_of([] { CostTransducer::parse("exp:x"); }), "transducer.InvalidTransducer");
  EXPECT_EQ(code_of([] { CostTransducer::parse("exp:1"); }), "transducer.NonMonotoneTransducer");
}
