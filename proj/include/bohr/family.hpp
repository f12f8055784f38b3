#pragma once

// Stage constants for the r-dimensional recursion and the block families
// built from them:
//   Zero      {H q + 1 : 1 <= q <= Q}
//   Empty     {H Delta_{}}
//   Subset(A) {H Delta_A (L j + 1) : j_min <= j <= Theta},  A nonempty in {1..r-1}.
// Membership is decided arithmetically, never by enumeration.

#include "bohr/dirichlet.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace bohr {

/// Sorted subset of {1..r-1}.
using Subset = std::vector<int>;

/// "{}" or "{1,2}".
std::string subset_key(const Subset& a);
Subset parse_subset_key(std::string_view key);
/// All subsets of {1..n}, ordered by size then lexicographically.
std::vector<Subset> all_subsets(int n);

struct BuildConfig {
  Track track = Track::Empirical;
  /// c_r for r >= 2.
  std::map<int, Rat> c;
  /// Denominator bound of the grid the empirical constants are minimal on.
  long grid_denom_max = 64;
  Precision precision;
  std::uint64_t seed = 0;
  unsigned long kappa_cap = 200000;
  /// Largest n allowed in Gamma = (n!)^2.
  unsigned long gamma_arg_cap = 20000;

  const Rat& c_for(int r) const;
};

/// One-dimensional constants for eps on the configured track, with Sigma a
/// multiple of `divisor`. The paper track halves eps until kappa! absorbs the
/// divisor; the empirical track takes the lcm on the grid.
DichotomyParams one_d_constants(const Rat& epsilon, const Int& divisor, const BuildConfig& cfg);

struct StageParams2 {
  Rat epsilon2;
  Rat epsilon1;
  Rat delta2;
  Int L;
  Int Gamma2;
  Int Sigma1;
  Int Theta1;
  Int Sigma2;
  Int Theta2;
  Int Q2;
};

/// Gamma = ((floor(c2/eps2) + 1)!)^2, eps1 = eps2 / (2 Gamma),
/// delta2 = eps2 / (2 Gamma^2 (L (Sigma1 + Theta1) + 1)), Q2 = floor(c2/delta2) + 1.
/// `divisor` is forwarded to the one-dimensional constants.
StageParams2 stage_params_2(const Rat& epsilon2, const Int& L, const Rat& c2, const BuildConfig& cfg,
                            const Int& divisor = 1);

struct StageParamsR {
  int r = 1;
  Rat epsilon;
  Int L;
  std::map<Subset, Int> Delta;
  Int Theta;
  Int Q;
  /// 0 for r = 1.
  Rat delta;
  /// Every intermediate choice, in the order it was made ("Gamma2", "r2.epsilon2", ...).
  std::vector<std::pair<std::string, std::string>> record;
};

/// r = 1: Delta_{} = Sigma L, Q = L Theta. r = 2: Delta_{} = Sigma2 L,
/// Delta_{1} = Gamma2. r >= 3: eps^(r-1) = eps/2, then
/// eps^(2) = min(eps^(r-1) / (2P), delta^(r-1) / 2, c2 eps / (4 c_r)) with
/// P = max Delta'(L Theta' + 1); Delta_{A'} = Sigma2 L Delta'_{A'},
/// Delta_{A' u {r-1}} = Gamma2 Delta'_{A'}; delta = delta2 / 2,
/// Theta = max(Theta2, Theta'), Q = floor(c_r / delta) + 1.
StageParamsR stage_params_general(int r, const Rat& epsilon, const Int& L, const BuildConfig& cfg);

/// True when the Delta values, sorted, divide each other in turn.
bool is_divisibility_chain(const std::map<Subset, Int>& delta);

enum class BlockKind { Zero, Empty, Subset };

const char* block_kind_name(BlockKind k);

struct BlockSpec {
  int stage = 1;
  BlockKind kind = BlockKind::Zero;
  Subset A;
  Int H;
  Int L;
  Int Delta;  // Empty, Subset
  Int Q;      // Zero
  Int Theta;  // Subset
  Rat epsilon;
  Int j_min = 1;

  Int size() const;
  Int min_element() const;
  Int max_element() const;
  /// k-th element (1-based: q for Zero, j - j_min + 1 for Subset).
  Int element(const Int& index) const;
  /// Index of n in the block (q, 1 or j), if n is an element.
  std::optional<Int> index_of(const Int& n) const;
  std::string label() const;
};

struct Stage {
  int N = 1;
  Rat epsilon;
  Int L;
  Int H;
  StageParamsR params;
  std::vector<BlockSpec> blocks;

  Int max_element() const;
  Int min_element() const;
};

struct SetFamily {
  int r = 1;
  Track track = Track::Empirical;
  BuildConfig config;
  std::vector<Stage> stages;
};

/// Optional per-stage overrides; empty entries use the defaults
/// eps_N = 2^-N, smallest admissible L_N and H_N.
struct ScheduleHints {
  std::vector<Rat> epsilon;
  std::vector<Int> L;
  std::vector<Int> H;
};

/// Lower bounds used by the schedule: L_N >= (44/7) 2^{N+2} for r >= 2
/// (L = 1 for r = 1), H_1 >= 20, H_{N+1} >= (44/7) 2^{N+2} H_N max(Q_N,
/// max_A Delta_A (L_N Theta_N + 1)) and H_{N+1} > max element of stage N.
Int min_L(int r, int N);
Int min_H_next(const Stage& prev);

SetFamily build_family(int r, int num_stages, const BuildConfig& cfg, const ScheduleHints& hints = {});

/// Builds the blocks of one stage from its parameters.
std::vector<BlockSpec> stage_blocks(int r, const Stage& stage);

struct Membership {
  int stage;
  BlockKind kind;
  Subset A;
  Int index;
};

std::optional<Membership> contains(const SetFamily& family, const Int& n);

struct ScheduleViolation {
  int stage;
  std::string rule;
  std::string detail;
};

struct ScheduleReport {
  std::vector<ScheduleViolation> violations;
  /// Pairs of blocks in one stage that share elements (reported, not an error).
  std::vector<std::string> overlaps;
  bool passed() const { return violations.empty(); }
};

ScheduleReport schedule_check(const SetFamily& family);

/// Elements of an enumerable block set, in block order.
std::vector<Int> enumerate_block(const BlockSpec& b, const Int& limit = Int(50000000));

/// One chosen stage of one family inside a union.
struct UnionComponent {
  int r;
  int stage;
  Int j_min = 1;
  std::vector<BlockSpec> blocks;
};

class BohrUnion {
 public:
  /// picks[i] = (stage N_r, j_min) for families[i]. Throws Overlap when the
  /// element ranges of the picked stages interleave.
  BohrUnion(const std::vector<SetFamily>& families, const std::vector<std::pair<int, Int>>& picks);

  const std::vector<UnionComponent>& components() const { return comps_; }

  struct Hit {
    std::size_t component;
    BlockKind kind;
    Subset A;
    Int index;
  };
  std::optional<Hit> contains(const Int& n) const;

 private:
  std::vector<UnionComponent> comps_;
};

/// Caveat attached to every Katznelson report.
inline constexpr const char* kKatznelsonCaveat =
    "rational stand-in angles: Q-independence not certified";

/// All n in [0, n_max] with min_j |lambda_j^n + 1| < delta.
std::vector<Int> katznelson_set(const std::vector<UAngle>& thetas, const Rat& delta, const Int& n_max,
                                const Precision& p = {});

}  // namespace bohr
