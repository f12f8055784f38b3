#pragma once

// One-dimensional engine: the power net (an eps-close power of mu reaches any
// target within C' / gamma steps), the collapse-or-hit dichotomy for a single
// rotation with its factorial constants, and a brute-force search for the
// smallest constants that make the dichotomy hold on a finite rational grid.

#include "bohr/circle.hpp"

#include <optional>
#include <variant>
#include <vector>

namespace bohr {

/// C = M_2 / M_1 = pi / 2 and C' = M_2 = 2 pi with M_1 = 4, M_2 = 2 pi.
struct NetConstants {
  RealEnclosure C;
  RealEnclosure Cprime;
};

NetConstants net_constants(unsigned precision_bits = 128);

enum class Track { Paper, Empirical };

const char* track_name(Track t);
Track parse_track(std::string_view text);

/// Sigma and Theta for one eps. On the paper track kappa = floor(4 pi^3 / eps),
/// Sigma = kappa!, Theta = kappa * floor((4 pi^3 / eps) * kappa!). On the
/// empirical track kappa is 0 and Sigma, Theta come from minimal_constants.
struct DichotomyParams {
  Rat epsilon;
  Int kappa;
  Int Sigma;
  Int Theta;
  Track track = Track::Paper;
};

/// floor(4 pi^3 / eps), resolved with adaptive-precision enclosures.
Int kappa_for(const Rat& epsilon);

/// Paper-track constants. Throws EpsilonTooLarge when kappa would be 0 and
/// SizeLimit when kappa exceeds kappa_cap.
DichotomyParams dichotomy_params(const Rat& epsilon, unsigned long kappa_cap = 200000);

/// Smallest p in [1, floor(C'/gamma)] with certified |mu^p - nu| <= C * eps.
/// Requires gamma < |mu - 1| < eps (certified, strict).
Int approx_power(const UAngle& mu, const Rat& gamma, const Rat& epsilon, const UAngle& nu,
                 const Precision& p = {});

struct PowerCollapse {
  Int n;
};
struct NetHit {
  Int j;
  Int n;
};

struct DichotomyOutcome {
  std::variant<PowerCollapse, NetHit> branch;
  ChordEnclosure certificate;

  bool collapsed() const { return std::holds_alternative<PowerCollapse>(branch); }
};

/// Either |lambda^{H Sigma L} - 1| < eps or |lambda^{H L j + S} - 1| < eps for
/// some 1 <= j <= Theta. Collapse is tested first; the j scan uses the
/// periodicity of rational angles. Throws NoBranch if neither holds.
DichotomyOutcome dichotomy(const UAngle& lambda, const Int& H, const Int& L, const Int& S,
                           const Rat& epsilon, const DichotomyParams& params, const Precision& p = {});

/// (H, L, S) instances the empirical constants must cover. `universal` means
/// every H and L (only their residues modulo the denominator matter) with
/// S in {1, H}.
struct ResidueRanges {
  std::vector<long> H;
  std::vector<long> L;
  bool s_one = true;
  bool s_h = true;
  bool universal = false;

  static ResidueRanges all() {
    ResidueRanges r;
    r.universal = true;
    return r;
  }
};

struct MinimalConstants {
  Int Sigma;
  Int Theta;
  /// False when the ascending search hit its budget and Sigma is the
  /// (valid, possibly non-minimal) lcm of the exact collapse requirements.
  bool sigma_minimal = true;
};

/// Smallest Sigma (then smallest Theta for it) such that every reduced
/// lambda with denominator <= grid_denom_max and every instance in `ranges`
/// satisfies one of the two branches.
MinimalConstants minimal_constants(const Rat& epsilon, long grid_denom_max, const ResidueRanges& ranges,
                                   const Precision& p = {}, unsigned long search_budget = 2000000);
MinimalConstants minimal_constants_serial(const Rat& epsilon, long grid_denom_max, const ResidueRanges& ranges,
                                          const Precision& p = {}, unsigned long search_budget = 2000000);

/// Constants with Sigma forced to be a multiple of `divisor`: Sigma is the
/// lcm of the minimal Sigma and the divisor (or of the exact requirements and
/// the divisor, when the former is not valid), Theta recomputed for it.
MinimalConstants constants_with_divisor(const Rat& epsilon, long grid_denom_max, const ResidueRanges& ranges,
                                        const Int& divisor, const Precision& p = {});

/// Smallest Theta making `sigma` valid on the grid, or nullopt if some
/// instance has neither branch.
std::optional<Int> theta_for_sigma(const Rat& epsilon, long grid_denom_max, const ResidueRanges& ranges,
                                   const Int& sigma, const Precision& p = {});

/// All reduced angles k/d with 1 <= d <= denom_max (0/1 included), by
/// denominator then numerator.
std::vector<UAngle> rational_grid(long denom_max);

}  // namespace bohr
