#pragma once

// Non-recurrence witnesses. A nested-interval (Cantor) construction picks
// theta with {m_k theta} <= 2 m_k / m_{k+1} for every k, close to 1/2, so
// that e^{2 i pi theta} is near -1 while its m_k-th powers stay near 1.

#include "bohr/family.hpp"
#include "bohr/family_io.hpp"

#include <optional>
#include <vector>

namespace bohr {

enum class WitnessKind { Mu0, MuEmpty, MuSubset };

struct BoundCert {
  std::size_t k;   // 1-based position in m
  Rat dist;        // {m_k theta}
  Rat bound;       // 2 m_k / m_{k+1}, or 0 for the last m
};

struct WitnessAngle {
  UAngle theta;
  WitnessKind kind = WitnessKind::Mu0;
  Subset A;
  Rat seed_lo;
  Rat seed_hi;
  std::vector<Int> m;
  std::vector<BoundCert> certs;

  std::string label() const;
};

/// Seed interval centred at 1/2 of length min(1, 132 / (7 m_1)) >= 6 pi / m_1.
std::pair<Rat, Rat> default_seed(const Int& m1);

/// Nested intervals over `depth` levels of m (depth <= m.size()). Level k
/// keeps the arc of radius 2/m_{k+1} around some i/m_k fully inside the
/// current interval whose centre is nearest the seed midpoint (ties: smaller
/// centre); the last level uses radius 0, so theta = i / m_depth.
/// Throws RatioViolation unless m_{k+1} > 2 m_k, EmptyIntersection if no arc fits.
WitnessAngle cantor_angle(const std::vector<Int>& m, const Rat& seed_lo, const Rat& seed_hi, std::size_t depth);

/// m_N = H_N.
WitnessAngle witness_mu0(const SetFamily& family);
/// m_N = H_N Delta_{N,{}} - 1.
WitnessAngle witness_mu_empty(const SetFamily& family);
/// m = (H_1 Delta_{1,A} - 1, H_1 Delta_{1,A} L_1, H_2 Delta_{2,A} - 1, ...).
WitnessAngle witness_mu_subset(const SetFamily& family, const Subset& A);

/// Mu0, MuEmpty and every nonempty A, in that order.
std::vector<WitnessAngle> all_witnesses(const SetFamily& family);

/// Independent re-check of every bound certificate and of the seed condition.
bool verify_witness(const WitnessAngle& w);

/// |lambda(theta) + 1| < 1.
bool near_minus_one(const UAngle& theta, const Precision& p = {});

Json witness_to_json(const WitnessAngle& w);
WitnessAngle witness_from_json(const Json& j);
Json witnesses_to_json(const std::vector<WitnessAngle>& ws);
std::vector<WitnessAngle> witnesses_from_json(const Json& j);

}  // namespace bohr
