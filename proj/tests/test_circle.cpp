#include "bohr/circle.hpp"

#include <doctest.h>

#include <cmath>

using namespace bohr;

namespace {

bool encloses(const ChordEnclosure& e, long double v, long double tol = 1e-15L) {
  return e.lo.get_d() <= v + tol && v - tol <= e.hi.get_d();
}

}  // namespace

TEST_CASE("rationals parse only as p/q") {
  CHECK(parse_rational("3/6") == Rat(1, 2));
  CHECK(parse_rational("-4/2") == Rat(-2));
  CHECK(to_string(Rat(3)) == "3/1");
  CHECK_THROWS_AS(parse_rational("0.5"), Error);
  CHECK_THROWS_AS(parse_rational("1/0"), Error);
  CHECK_THROWS_AS(parse_rational("1"), Error);
  CHECK(parse_integer("-12") == -12);
  CHECK_THROWS_AS(parse_integer("1e3"), Error);
}

TEST_CASE("integer helpers") {
  CHECK(factorial(5) == 120);
  CHECK(lcm_of(4, 6) == 12);
  CHECK(gcd_of(4, 6) == 2);
  CHECK(mod_floor(-1, 7) == 6);
  CHECK(floor_of(Rat(-1, 2)) == -1);
  CHECK(ceil_of(Rat(-1, 2)) == 0);
}

TEST_CASE("angles are canonical") {
  const UAngle a(Int(5), Int(4));
  CHECK(a.numer() == 1);
  CHECK(a.denom() == 4);
  CHECK(UAngle(Int(-1), Int(3)) == UAngle(Int(2), Int(3)));
  CHECK(UAngle::parse("6/8").str() == "3/4");
}

TEST_CASE("reduce") {
  CHECK(reduce(UAngle::parse("1/3"), 3).is_zero());
  Int big;
  mpz_ui_pow_ui(big.get_mpz_t(), 2, 300);
  CHECK(reduce(UAngle::parse("1/2"), big).is_zero());
  Int ten500;
  mpz_ui_pow_ui(ten500.get_mpz_t(), 10, 500);
  // 10 = 3 mod 7 and 3^6 = 1 mod 7, so 10^500 = 3^2 = 2 mod 7.
  Int expected;
  mpz_powm_ui(expected.get_mpz_t(), Int(10).get_mpz_t(), 500, Int(7).get_mpz_t());
  CHECK(expected == 2);
  CHECK(reduce(UAngle::parse("2/7"), ten500) == UAngle(Int(4), Int(7)));
  CHECK(reduce(UAngle::parse("1/3"), -1) == UAngle(Int(2), Int(3)));
}

TEST_CASE("dist_to_Z") {
  CHECK(dist_to_Z(UAngle::parse("1/3")).value == Rat(1, 3));
  CHECK(dist_to_Z(UAngle::parse("9/10")).value == Rat(1, 10));
  CHECK(dist_to_Z(UAngle::parse("1/2")).value == Rat(1, 2));
  CHECK(dist_to_Z(UAngle()).value == 0);
}

TEST_CASE("chord enclosures") {
  const ChordEnclosure z = chord(DistZ{Rat(0)}, 128);
  CHECK(z.exact());
  CHECK(z.lo == 0);
  const ChordEnclosure two = chord(DistZ{Rat(1, 2)}, 128);
  CHECK(two.lo == 2);
  CHECK(two.hi == 2);
  CHECK(chord(DistZ{Rat(1, 6)}, 64).lo == 1);

  const ChordEnclosure s = chord(DistZ{Rat(1, 4)}, 128);
  // Exact oracle: lo^2 <= 2 <= hi^2.
  CHECK(s.lo * s.lo <= 2);
  CHECK(s.hi * s.hi >= 2);
  Rat width_bound(1);
  mpz_mul_2exp(width_bound.get_den_mpz_t(), width_bound.get_den_mpz_t(), 127);
  CHECK(s.hi - s.lo <= width_bound);
  CHECK(s.lo >= 0);
  CHECK(s.hi <= 2);
}

TEST_CASE("pow_chord") {
  CHECK(pow_chord(UAngle::parse("1/3"), 6, 128).hi == 0);
  const ChordEnclosure m = pow_chord(UAngle::parse("1/4"), 2, 128);
  CHECK(m.lo == 2);
  CHECK(m.hi == 2);
  Int ten500;
  mpz_ui_pow_ui(ten500.get_mpz_t(), 10, 500);
  const ChordEnclosure e = pow_chord(UAngle::parse("2/7"), ten500, 128);
  CHECK(encloses(e, 2.0L * std::sin(3.0L * 3.14159265358979323846264338327950288L / 7.0L)));
}

TEST_CASE("compare_chord") {
  CHECK(compare_chord(chord(DistZ{Rat(0)}, 64), Rat(1, 2)) == ChordOrder::Below);
  CHECK(compare_chord(chord(DistZ{Rat(1, 2)}, 64), Rat(1, 2)) == ChordOrder::Above);
  const ChordEnclosure s = chord(DistZ{Rat(1, 4)}, 128);
  const Rat mid = (s.lo + s.hi) / 2;
  CHECK(compare_chord(s, mid) == ChordOrder::Inconclusive);
  CHECK(compare_chord(s, Rat(141421, 100000)) == ChordOrder::Above);
  CHECK(compare_chord(s, Rat(141422, 100000)) == ChordOrder::Below);
  CHECK(cmp_chord(DistZ{Rat(1, 6)}, Rat(1)) == 0);
  CHECK(chord_lt(DistZ{Rat(1, 4)}, Rat(3, 2)));
  CHECK(chord_gt(DistZ{Rat(1, 4)}, Rat(7, 5)));
}

TEST_CASE("pi enclosure") {
  const RealEnclosure pi = pi_enclosure(128);
  CHECK(pi.lo < Rat(314159265358979324, 100000000000000000));
  CHECK(pi.hi > Rat(314159265358979323, 100000000000000000));
  CHECK(pi.hi * 2 < two_pi_upper());
}
