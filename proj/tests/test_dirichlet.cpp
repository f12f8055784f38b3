#include "bohr/dirichlet.hpp"

#include <doctest.h>

using namespace bohr;

namespace {

// Brute-force oracle: Sigma, Theta are valid on the grid when every lambda and
// every H, L, S in the checked ranges has a collapse or a hit.
bool valid_by_brute_force(const Rat& eps, long grid, const Int& sigma, const Int& theta, long hl_max) {
  for (const UAngle& lam : rational_grid(grid)) {
    for (long H = 1; H <= hl_max; ++H) {
      for (long L = 1; L <= hl_max; ++L) {
        if (chord_lt(dist_to_Z(reduce(lam, Int(H) * sigma * L)), eps)) continue;
        for (long S : {1L, H}) {
          bool hit = false;
          for (Int j = 1; j <= theta && !hit; ++j) hit = chord_lt(dist_to_Z(reduce(lam, Int(H) * L * j + S)), eps);
          if (!hit) return false;
        }
      }
    }
  }
  return true;
}

}  // namespace

TEST_CASE("net constants") {
  const NetConstants nc = net_constants(128);
  CHECK(nc.C.lo < Rat(15708, 10000));
  CHECK(nc.C.hi > Rat(15707, 10000));
  CHECK(nc.Cprime.lo < Rat(62832, 10000));
  CHECK(nc.Cprime.hi > Rat(62831, 10000));
  CHECK(nc.C.lo * nc.Cprime.lo < Rat(98697, 10000));
  CHECK(nc.C.hi * nc.Cprime.hi > Rat(98696, 10000));
  const Rat four_pi_cubed_lo = 4 * nc.C.lo * nc.Cprime.lo * pi_enclosure(128).lo;
  const Rat four_pi_cubed_hi = 4 * nc.C.hi * nc.Cprime.hi * pi_enclosure(128).hi;
  CHECK(four_pi_cubed_lo < Rat(124026, 1000));
  CHECK(four_pi_cubed_hi > Rat(124025, 1000));
}

TEST_CASE("dichotomy_params formula") {
  // eps just below 4 pi^3, 2 pi^3 and pi^3.
  const DichotomyParams a = dichotomy_params(Rat(124025, 1000));
  CHECK(a.kappa == 1);
  CHECK(a.Sigma == 1);
  CHECK(a.Theta == 1);
  const DichotomyParams b = dichotomy_params(Rat(62012, 1000));
  CHECK(b.kappa == 2);
  CHECK(b.Sigma == 2);
  CHECK(b.Theta == 8);
  const DichotomyParams c = dichotomy_params(Rat(31006, 1000));
  CHECK(c.kappa == 4);
  CHECK(c.Sigma == 24);
  CHECK(c.Theta == 384);
  CHECK(kappa_for(Rat(1)) == 124);
  CHECK(kappa_for(Rat(1, 2)) == 248);
  CHECK(dichotomy_params(Rat(1, 2)).Sigma == factorial(248));
  CHECK(dichotomy_params(Rat(1, 2)).Theta >= dichotomy_params(Rat(1, 2)).Sigma);
  CHECK_THROWS_AS(dichotomy_params(Rat(125)), Error);
  CHECK_THROWS_AS(dichotomy_params(Rat(1, 100000), 1000), Error);
}

TEST_CASE("approx_power returns the smallest certified power") {
  // The first power already meets the bound C eps = (pi/2) eps in each case.
  CHECK(approx_power(UAngle::parse("1/2"), Rat(1), Rat(21, 10), UAngle()) == 1);
  CHECK(approx_power(UAngle::parse("1/8"), Rat(1, 2), Rat(4, 5), UAngle::parse("1/2")) == 3);
  CHECK(approx_power(UAngle::parse("1/8"), Rat(1, 2), Rat(4, 5), UAngle()) == 1);
  // Exact powers also satisfy the bound.
  const Rat bound = Rat(157, 100) * Rat(4, 5);
  CHECK(chord_lt(dist_to_Z(reduce(UAngle::parse("1/8"), 4) - UAngle::parse("1/2")), bound));
  CHECK(dist_to_Z(reduce(UAngle::parse("1/8"), 8)).value == 0);
  CHECK(dist_to_Z(reduce(UAngle::parse("1/2"), 2)).value == 0);
  // gamma < |mu - 1| < eps is required.
  CHECK_THROWS_AS(approx_power(UAngle::parse("1/2"), Rat(1), Rat(2), UAngle()), Error);
  CHECK_THROWS_AS(approx_power(UAngle(), Rat(1, 2), Rat(1), UAngle()), Error);
}

TEST_CASE("approx_power agrees with exhaustive search") {
  const NetConstants nc = net_constants(128);
  for (const UAngle& mu : rational_grid(12)) {
    if (mu.is_zero()) continue;
    const Rat eps(21, 10), gamma(1, 10);
    if (!chord_gt(dist_to_Z(mu), gamma) || !chord_lt(dist_to_Z(mu), eps)) continue;
    for (const UAngle& nu : rational_grid(5)) {
      const Int p = approx_power(mu, gamma, eps, nu);
      const Rat target_lo = nc.C.lo * eps;
      CHECK(p >= 1);
      CHECK(p <= floor_of(Rat(63, 10) / gamma));
      CHECK(chord_lt(dist_to_Z(reduce(mu, p) - nu), nc.C.hi * eps));
      for (Int q = 1; q < p; ++q) CHECK(chord_gt(dist_to_Z(reduce(mu, q) - nu), target_lo));
    }
  }
}

TEST_CASE("dichotomy examples") {
  const DichotomyParams half = dichotomy_params(Rat(1, 2));
  const DichotomyOutcome z = dichotomy(UAngle(), 1, 1, 1, Rat(1, 2), half);
  CHECK(z.collapsed());
  CHECK(z.certificate.hi == 0);

  const DichotomyOutcome f = dichotomy(UAngle::parse("1/5"), 1, 1, 1, Rat(1, 2), half);
  CHECK(f.collapsed());
  CHECK(std::get<PowerCollapse>(f.branch).n == factorial(248));

  const DichotomyParams quarter = dichotomy_params(Rat(1, 4));
  const DichotomyOutcome t = dichotomy(UAngle::parse("1/3"), 2, 1, 1, Rat(1, 4), quarter);
  const Int n = t.collapsed() ? std::get<PowerCollapse>(t.branch).n : std::get<NetHit>(t.branch).n;
  CHECK(chord_lt(dist_to_Z(reduce(UAngle::parse("1/3"), n)), Rat(1, 4)));
  if (t.collapsed()) {
    CHECK(n == 2 * quarter.Sigma);
  } else {
    const Int j = std::get<NetHit>(t.branch).j;
    CHECK(n == 2 * j + 1);
    CHECK(j <= quarter.Theta);
  }
}

TEST_CASE("minimal constants") {
  const MinimalConstants one = minimal_constants(Rat(1, 2), 1, ResidueRanges::all());
  CHECK(one.Sigma == 1);
  CHECK(one.Theta == 1);

  const MinimalConstants three = minimal_constants(Rat(1, 2), 3, ResidueRanges::all());
  CHECK(6 % three.Sigma == 0);
  CHECK(valid_by_brute_force(Rat(1, 2), 3, three.Sigma, three.Theta, 6));
  for (Int s = 1; s < three.Sigma; ++s) CHECK_FALSE(theta_for_sigma(Rat(1, 2), 3, ResidueRanges::all(), s));
  if (three.Theta > 1) CHECK_FALSE(valid_by_brute_force(Rat(1, 2), 3, three.Sigma, three.Theta - 1, 6));

  const MinimalConstants two = minimal_constants(Rat(19, 10), 2, ResidueRanges::all());
  CHECK(two.Sigma <= 2);
  CHECK(theta_for_sigma(Rat(19, 10), 2, ResidueRanges::all(), 2).has_value());

  const MinimalConstants div = constants_with_divisor(Rat(1, 2), 3, ResidueRanges::all(), 5);
  CHECK(div.Sigma % 5 == 0);
  CHECK(valid_by_brute_force(Rat(1, 2), 3, div.Sigma, div.Theta, 6));
}

TEST_CASE("rational grid") {
  const auto g = rational_grid(4);
  // 0/1, 1/2, 1/3, 2/3, 1/4, 3/4
  CHECK(g.size() == 6);
  CHECK(g.front().is_zero());
}

TEST_CASE("track names") {
  CHECK(parse_track("paper") == Track::Paper);
  CHECK(parse_track("empirical") == Track::Empirical);
  CHECK_THROWS_AS(parse_track("other"), Error);
}
