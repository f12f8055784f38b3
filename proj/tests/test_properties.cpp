#include "bohr/audit.hpp"

#include <doctest.h>

#include <random>

using namespace bohr;

namespace {

UAngle random_angle(std::mt19937_64& rng, long denom_max) {
  std::uniform_int_distribution<long> den(1, denom_max);
  const long d = den(rng);
  std::uniform_int_distribution<long> num(0, d - 1);
  return UAngle(Int(num(rng)), Int(d));
}

bool same_reports(const AuditReport& a, const AuditReport& b) {
  if (a.instances.size() != b.instances.size()) return false;
  for (std::size_t i = 0; i < a.instances.size(); ++i) {
    if (a.instances[i].pass != b.instances[i].pass || a.instances[i].data != b.instances[i].data) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("chord lies between 4d and 2 pi d") {
  for (const UAngle& x : rational_grid(60)) {
    if (x.is_zero()) continue;
    const DistZ d = dist_to_Z(x);
    CHECK(cmp_chord(d, 4 * d.value) >= 0);
    CHECK(chord_lt(d, two_pi_upper() * d.value));
  }
}

TEST_CASE("enclosures nest and narrow with precision") {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 200; ++t) {
    const DistZ d = dist_to_Z(random_angle(rng, 1000));
    ChordEnclosure prev = chord(d, 32);
    for (unsigned bits : {64u, 128u, 256u, 512u}) {
      const ChordEnclosure e = chord(d, bits);
      CHECK(prev.lo <= e.lo);
      CHECK(e.hi <= prev.hi);
      CHECK(e.hi - e.lo <= prev.hi - prev.lo);
      prev = e;
    }
  }
}

TEST_CASE("chord symmetry and periodicity") {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 300; ++t) {
    const UAngle x = random_angle(rng, 500);
    CHECK(dist_to_Z(x).value == dist_to_Z(-x).value);
    const ChordEnclosure a = chord(dist_to_Z(x), 128);
    const ChordEnclosure b = chord(dist_to_Z(-x), 128);
    CHECK(a.lo == b.lo);
    CHECK(a.hi == b.hi);
    const Int n(static_cast<long>(rng() % 10000));
    CHECK(reduce(x, n) == reduce(x, n + x.denom()));
    CHECK(reduce(x, n) + reduce(x, 7) == reduce(x, n + 7));
  }
}

TEST_CASE("residue condition check matches enumeration") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 150; ++t) {
    const int r = 1 + static_cast<int>(rng() % 3);
    std::vector<UAngle> lam;
    for (int i = 0; i < r; ++i) lam.push_back(random_angle(rng, 20));
    const Rat eps(1, 2 + static_cast<long>(rng() % 6));
    const Rat Q(1 + static_cast<long>(rng() % 40));
    const Rat c(1 + static_cast<long>(rng() % 48), 16);
    const Int H(1 + static_cast<long>(rng() % 5));
    const IndepReport fast = check_condition(lam, eps, Q, c, H);
    const IndepReport slow = check_condition_enumerated(lam, eps, Q, c, H);
    CHECK(fast.passed == slow.passed);
    CHECK(condition_holds(lam, eps, Q, c, H) == slow.passed);
    CHECK(fast.worst_vec.has_value() == slow.worst_vec.has_value());
    if (fast.worst_vec && slow.worst_vec) {
      // Ties may pick different vectors but the margins agree.
      CHECK(fast.worst_margin_lo <= slow.worst_margin_hi);
      CHECK(slow.worst_margin_lo <= fast.worst_margin_hi);
    }
  }
}

TEST_CASE("condition is monotone in c") {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 100; ++t) {
    const std::vector<UAngle> lam{random_angle(rng, 15), random_angle(rng, 15)};
    bool prev = true;
    for (long k = 1; k <= 64; k += 3) {
      const bool now = condition_holds(lam, Rat(1, 4), Rat(8), Rat(k, 16), 1);
      if (!prev) CHECK_FALSE(now);
      prev = now;
    }
  }
}

TEST_CASE("simultaneous hit agrees with a direct scan") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 100; ++t) {
    const std::vector<UAngle> lam{random_angle(rng, 12), random_angle(rng, 12)};
    const std::vector<UAngle> mu{random_angle(rng, 12), random_angle(rng, 12)};
    const Rat eps(1, 3);
    const auto q = simultaneous_hit(lam, mu, eps, 200, 1);
    std::optional<Int> direct;
    for (long k = 1; k <= 200 && !direct; ++k) {
      bool ok = true;
      for (std::size_t i = 0; i < lam.size() && ok; ++i) ok = chord_lt(dist_to_Z(reduce(lam[i], k) - mu[i]), eps);
      if (ok) direct = Int(k);
    }
    CHECK(q == direct);
  }
}

TEST_CASE("serial and parallel drivers agree") {
  const MinimalConstants a = minimal_constants(Rat(1, 4), 16, ResidueRanges::all());
  const MinimalConstants b = minimal_constants_serial(Rat(1, 4), 16, ResidueRanges::all());
  CHECK(a.Sigma == b.Sigma);
  CHECK(a.Theta == b.Theta);
  CHECK(a.sigma_minimal == b.sigma_minimal);

  BuildConfig cfg;
  cfg.grid_denom_max = 12;
  cfg.c[2] = Rat(101, 16);
  const SetFamily fam = build_family(2, 2, cfg);
  CHECK(same_reports(grid_audit(fam, 8), grid_audit_serial(fam, 8)));

  BuildConfig paper;
  paper.track = Track::Paper;
  CHECK(same_reports(dichotomy_audit({Rat(1, 2)}, 12, {1, 2}, {1, 2}, paper),
                     dichotomy_audit_serial({Rat(1, 2)}, 12, {1, 2}, {1, 2}, paper)));
}

TEST_CASE("stage parameters form divisibility chains") {
  BuildConfig cfg;
  cfg.grid_denom_max = 8;
  cfg.c[2] = Rat(101, 16);
  for (long e = 2; e <= 5; ++e) {
    for (long L = 1; L <= 4; ++L) {
      const StageParamsR p = stage_params_general(2, Rat(1, e), L, cfg);
      CHECK(is_divisibility_chain(p.Delta));
      CHECK(p.Delta.size() == 2);
      CHECK(p.delta > 0);
      CHECK(Rat(p.Q) > cfg.c[2] / p.delta);
      for (const auto& [a, v] : p.Delta) CHECK(v >= 1);
    }
  }
}

TEST_CASE("built families pass their own schedule and witnesses") {
  BuildConfig cfg;
  cfg.grid_denom_max = 12;
  cfg.c[2] = Rat(101, 16);
  for (int r = 1; r <= 2; ++r) {
    const SetFamily fam = build_family(r, 3, cfg);
    CHECK(schedule_check(fam).passed());
    for (const WitnessAngle& w : all_witnesses(fam)) CHECK(verify_witness(w));
    for (std::size_t s = 1; s < fam.stages.size(); ++s) {
      CHECK(fam.stages[s].min_element() > fam.stages[s - 1].max_element());
      CHECK(fam.stages[s].epsilon < fam.stages[s - 1].epsilon);
    }
  }
}
