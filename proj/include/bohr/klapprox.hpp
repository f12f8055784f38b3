#pragma once

// Simultaneous inhomogeneous approximation for r-tuples of rational angles:
// the small-combination set E, the independence condition
//   Q |lambda^{H a} - 1| + eps * |a|_1 >= c   for every a in E,
// and the bounded hit it promises, found by exhaustive periodic scan.

#include "bohr/circle.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace bohr {

using IntVec = std::vector<long>;

long l1_norm(const IntVec& a);

/// Nonzero integer vectors of length r with l1 norm < c / eps, in
/// lexicographic order. Throws SizeLimit past `cap` vectors.
std::vector<IntVec> e_set(const Rat& epsilon, int r, const Rat& c, std::size_t cap = 10000000);

/// Number of nonzero lattice points of Z^r with l1 norm <= radius (closed form).
Int l1_ball_count(int r, long radius);

struct IndepReport {
  bool passed = true;
  /// Vector of smallest margin Q |lambda^{Ha} - 1| + eps |a| - c (absent when E is empty).
  std::optional<IntVec> worst_vec;
  Rat worst_margin_lo;
  Rat worst_margin_hi;
  Rat epsilon;
  Rat Q;
  Rat c;
};

/// Condition check over residues: for each value of sum a_i H theta_i only the
/// smallest-norm vector reaching it matters. Requires the common denominator
/// to fit comfortably in memory (falls back to enumeration otherwise).
IndepReport check_condition(const std::vector<UAngle>& lambdas, const Rat& epsilon, const Rat& Q, const Rat& c,
                            const Int& H, const Precision& p = {});

/// Same verdict, computed by walking e_set directly. Reference for tests.
IndepReport check_condition_enumerated(const std::vector<UAngle>& lambdas, const Rat& epsilon, const Rat& Q,
                                       const Rat& c, const Int& H, const Precision& p = {});

/// Pass/fail only, with early exit.
bool condition_holds(const std::vector<UAngle>& lambdas, const Rat& epsilon, const Rat& Q, const Rat& c,
                     const Int& H, const Precision& p = {});

/// Smallest q in [1, Q] with max_i |lambda_i^{Hq} - mu_i| < eps, scanning at
/// most one period (lcm of the reduced denominators).
std::optional<Int> simultaneous_hit(const std::vector<UAngle>& lambdas, const std::vector<UAngle>& mus,
                                    const Rat& epsilon, const Int& Q, const Int& H, const Precision& p = {});

/// One soundness instance: angles, targets and an (eps, Q) pair with H = 1.
struct KLInstance {
  std::vector<UAngle> lambdas;
  std::vector<UAngle> mus;
  Rat epsilon;
  Int Q;
};

/// Seeded instances: `trials` random tuples with denominators <= denom_max,
/// each paired with the conjugate target and one random target, over the
/// ladder eps in {1/2, 1/4, 1/8} x Q in {1, 4, 16, 64, 256}.
std::vector<KLInstance> kl_instances(int r, int trials, long denom_max, std::uint64_t seed);

/// Candidate values k/16, k = 1..256.
std::vector<Rat> calibration_ladder();

/// Smallest ladder value c for which every generated instance whose
/// condition passes also has a hit. The condition only gets harder as c
/// grows, so every larger c is sound as well.
Rat calibrate_c(int r, int trials, long denom_max, std::uint64_t seed, const Precision& p = {});

}  // namespace bohr
