#pragma once

// Verification sweeps. Every audit partitions into independent instances;
// the OpenMP drivers and the serial reference drivers produce identical,
// index-ordered reports.

#include "bohr/family.hpp"
#include "bohr/family_io.hpp"
#include "bohr/klapprox.hpp"
#include "bohr/witness.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace bohr {

enum class AuditKind { Recurrence, NonRecurrence, Dichotomy, Trichotomy, KLSoundness, Union };

const char* audit_kind_name(AuditKind k);

struct AuditInstance {
  bool pass = false;
  Json data;  // input, outcome and certificate values, all as strings
};

struct AuditReport {
  AuditKind kind = AuditKind::Recurrence;
  std::vector<AuditInstance> instances;
  Json config = Json::object();
  std::string family_digest;

  std::size_t pass_count() const;
  std::size_t fail_count() const;
  bool passed() const { return fail_count() == 0; }
};

Json report_summary(const AuditReport& rep);
/// One JSON object per line, in instance order.
std::string report_jsonl(const AuditReport& rep);

struct RecurrenceHit {
  Int n;
  std::size_t block;  // index into the block list
  Int index;          // q, 1 or j
  Rat chord_hi;       // certified max_i |lambda_i^n - 1| <= chord_hi < eps
};

/// First block (in order) and smallest index whose element n has
/// max_i |lambda_i^n - 1| < eps. Scans are cut to one period of the reduced
/// angles; throws SizeLimit past `scan_cap` steps in one block.
std::optional<RecurrenceHit> blocks_hit(const std::vector<BlockSpec>& blocks, const std::vector<UAngle>& lambdas,
                                        const Rat& epsilon, const Precision& p = {},
                                        const Int& scan_cap = Int(10000000));

/// Hit in the first stage with eps_N <= eps.
std::optional<RecurrenceHit> recurrence_hit(const SetFamily& family, const std::vector<UAngle>& lambdas,
                                            const Rat& epsilon, const Precision& p = {});

/// All r-tuples of reduced rationals with denominator <= denom_max, every
/// stage at its own eps (or at eps_override when given).
AuditReport grid_audit(const SetFamily& family, long denom_max, const std::optional<Rat>& eps_override = {});
AuditReport grid_audit_serial(const SetFamily& family, long denom_max,
                              const std::optional<Rat>& eps_override = {});

/// All r-tuples, as flat index -> tuple.
std::vector<std::vector<UAngle>> grid_tuples(int r, long denom_max);

struct SamplingPolicy {
  /// Blocks up to this size are enumerated in full.
  Int full_limit = 200000;
  long head = 1000;
  long random = 1000;
  std::uint64_t seed = 0;
};

/// Indices audited in a block of `size` elements (sorted, distinct).
std::vector<Int> sample_indices(const Int& size, const SamplingPolicy& policy, std::uint64_t stream);

/// Schedule and witness checks first (their violations are failures), then
/// every sampled element of the first `depth` stages must satisfy
/// |mu^n - 1| > delta for its block's witness.
AuditReport nonrecurrence_audit(const SetFamily& family, const std::vector<WitnessAngle>& witnesses,
                                const Rat& delta, int depth, const SamplingPolicy& policy = {});

/// Every pair of grid angles and every H: some element of
/// {Hq+1 : q <= Q2} u {H Sigma2 L} u {H Gamma2 (Lj+1) : j <= Theta2} has both
/// chords below eps2. delta_scale multiplies delta2 before Q2 is derived.
/// Empirical one-dimensional constants are taken on the audited grid.
AuditReport trichotomy_audit(const Rat& epsilon2, const Int& L, const Rat& c2, long denom_max,
                             const std::vector<long>& H_range, const BuildConfig& cfg,
                             const Rat& delta_scale = Rat(1));

/// Dichotomy totality with certificate re-check at doubled precision.
AuditReport dichotomy_audit(const std::vector<Rat>& epsilons, long denom_max, const std::vector<long>& H_range,
                            const std::vector<long>& L_range, const BuildConfig& cfg);
AuditReport dichotomy_audit_serial(const std::vector<Rat>& epsilons, long denom_max,
                                   const std::vector<long>& H_range, const std::vector<long>& L_range,
                                   const BuildConfig& cfg);

/// Every generated instance whose condition passes at c must have a hit.
AuditReport kl_soundness_audit(int r, int trials, long denom_max, std::uint64_t seed, const Rat& c,
                               const Precision& p = {});

/// Union consistency: every enumerable element is a member of its own
/// component and no other, and every r-tuple with denominator <= denom_max
/// hits inside each r-component at that component's eps.
AuditReport union_audit(const BohrUnion& u, long denom_max, const Int& enumerate_limit = Int(200000));

}  // namespace bohr
