#include "bohr/klapprox.hpp"

#include <doctest.h>

using namespace bohr;

namespace {

std::vector<UAngle> angles(std::initializer_list<const char*> xs) {
  std::vector<UAngle> out;
  for (const char* x : xs) out.push_back(UAngle::parse(x));
  return out;
}

}  // namespace

TEST_CASE("e_set sizes") {
  CHECK(e_set(Rat(2, 5), 2, Rat(1)).size() == 12);
  CHECK(e_set(Rat(1, 2), 3, Rat(1, 2)).empty());
  CHECK(e_set(Rat(1), 2, Rat(1, 2)).empty());
  const auto one = e_set(Rat(2, 7), 1, Rat(1));
  CHECK(one.size() == 6);
  for (const IntVec& a : one) CHECK(l1_norm(a) <= 3);
  CHECK_THROWS_AS(e_set(Rat(1, 1000000), 4, Rat(1), 1000), Error);
}

TEST_CASE("l1 ball count matches enumeration") {
  for (int r = 1; r <= 4; ++r) {
    for (long R = 0; R <= 5; ++R) {
      // e_set keeps norms < c / eps; c / eps = R + 1/2 keeps norms <= R.
      CHECK(Int(e_set(Rat(2, 2 * R + 1), r, Rat(1)).size()) == l1_ball_count(r, R));
    }
  }
}

TEST_CASE("check_condition examples") {
  const IndepReport zero = check_condition(angles({"0/1", "0/1"}), Rat(1, 4), Rat(100), Rat(1, 2), 1);
  CHECK_FALSE(zero.passed);
  REQUIRE(zero.worst_vec.has_value());
  CHECK(l1_norm(*zero.worst_vec) == 1);
  CHECK(zero.worst_margin_lo == Rat(1, 4) - Rat(1, 2));

  CHECK(check_condition(angles({"1/2"}), Rat(1, 2), Rat(1), Rat(1), 1).passed);
  const IndepReport vac = check_condition(angles({"1/3"}), Rat(1, 2), Rat(1), Rat(1, 2), 1);
  CHECK(vac.passed);
  CHECK_FALSE(vac.worst_vec.has_value());
}

TEST_CASE("simultaneous_hit examples") {
  CHECK(simultaneous_hit(angles({"1/4", "1/3"}), angles({"3/4", "2/3"}), Rat(1, 10), 12, 1) == Int(11));
  CHECK(simultaneous_hit(angles({"0/1", "0/1"}), angles({"0/1", "0/1"}), Rat(1, 10), 5, 1) == Int(1));
  CHECK_FALSE(simultaneous_hit(angles({"0/1"}), angles({"1/2"}), Rat(1, 2), Int(1000000), 1).has_value());
  CHECK_FALSE(simultaneous_hit(angles({"1/4", "1/3"}), angles({"3/4", "2/3"}), Rat(1, 10), 10, 1).has_value());
}

TEST_CASE("calibration") {
  CHECK_THROWS_AS(calibrate_c(2, 0, 10, 0), Error);
  const auto ladder = calibration_ladder();
  CHECK(ladder.size() == 256);
  CHECK(ladder.front() == Rat(1, 16));
  CHECK(ladder.back() == 16);
  const Rat c1 = calibrate_c(1, 20, 12, 0);
  CHECK(c1 > 0);
  // Deterministic given the seed.
  CHECK(calibrate_c(1, 20, 12, 0) == c1);
  const auto inst = kl_instances(2, 5, 10, 7);
  const auto again = kl_instances(2, 5, 10, 7);
  REQUIRE(inst.size() == again.size());
  for (std::size_t i = 0; i < inst.size(); ++i) {
    CHECK(inst[i].lambdas == again[i].lambdas);
    CHECK(inst[i].mus == again[i].mus);
    CHECK(inst[i].epsilon == again[i].epsilon);
    CHECK(inst[i].Q == again[i].Q);
  }
}
