#include "bohr/dirichlet.hpp"

#include <mpfr.h>
#include <omp.h>

#include <algorithm>
#include <exception>
#include <numeric>

namespace bohr {

namespace {

class Mpfr {
 public:
  explicit Mpfr(mpfr_prec_t bits) { mpfr_init2(v_, bits); }
  ~Mpfr() { mpfr_clear(v_); }
  Mpfr(const Mpfr&) = delete;
  Mpfr& operator=(const Mpfr&) = delete;
  mpfr_ptr get() { return v_; }

 private:
  mpfr_t v_;
};

Int floor_mpfr(Mpfr& x) {
  Int z;
  mpfr_get_z(z.get_mpz_t(), x.get(), MPFR_RNDD);
  return z;
}

// Enclosure [lo, hi] of 4 pi^3 / eps * factor, at `bits` of working precision.
void four_pi_cubed_over(const Rat& eps, const Int& factor, mpfr_prec_t bits, Mpfr& lo, Mpfr& hi) {
  mpfr_const_pi(lo.get(), MPFR_RNDD);
  mpfr_pow_ui(lo.get(), lo.get(), 3, MPFR_RNDD);
  mpfr_mul_ui(lo.get(), lo.get(), 4, MPFR_RNDD);
  mpfr_mul_z(lo.get(), lo.get(), factor.get_mpz_t(), MPFR_RNDD);
  mpfr_div_q(lo.get(), lo.get(), eps.get_mpq_t(), MPFR_RNDD);

  mpfr_const_pi(hi.get(), MPFR_RNDU);
  mpfr_pow_ui(hi.get(), hi.get(), 3, MPFR_RNDU);
  mpfr_mul_ui(hi.get(), hi.get(), 4, MPFR_RNDU);
  mpfr_mul_z(hi.get(), hi.get(), factor.get_mpz_t(), MPFR_RNDU);
  mpfr_div_q(hi.get(), hi.get(), eps.get_mpq_t(), MPFR_RNDU);
  (void)bits;
}

// floor(4 pi^3 / eps * factor); the argument is irrational so doubling terminates.
Int floor_four_pi_cubed_over(const Rat& eps, const Int& factor) {
  mpfr_prec_t bits = static_cast<mpfr_prec_t>(mpz_sizeinbase(factor.get_mpz_t(), 2)) + 128;
  for (;;) {
    Mpfr lo(bits), hi(bits);
    four_pi_cubed_over(eps, factor, bits, lo, hi);
    Int a = floor_mpfr(lo);
    Int b = floor_mpfr(hi);
    if (a == b) return a;
    bits *= 2;
    if (bits > (mpfr_prec_t(1) << 28)) throw Error(ErrorCode::Inconclusive, "floor of 4 pi^3 / eps unresolved");
  }
}

// Smallest certifying enclosure with hi < bound (the comparison is already known to be Below).
ChordEnclosure certify_below(const DistZ& d, const Rat& bound, const Precision& p) {
  for (unsigned bits = p.start_bits; bits <= p.cap_bits; bits *= 2) {
    ChordEnclosure e = chord(d, bits);
    if (compare_chord(e, bound) == ChordOrder::Below) return e;
  }
  throw Error(ErrorCode::Inconclusive, "could not certify chord below bound");
}

// Sign of 2 sin(pi d) - (pi/2) * eps, both irrational, by refinement.
int cmp_chord_half_pi_times(const DistZ& d, const Rat& eps, const Precision& p) {
  for (unsigned bits = p.start_bits; bits <= p.cap_bits; bits *= 2) {
    const ChordEnclosure e = chord(d, bits);
    const RealEnclosure pi = pi_enclosure(bits);
    const Rat b_lo = pi.lo * eps / 2;
    const Rat b_hi = pi.hi * eps / 2;
    if (e.hi < b_lo) return -1;
    if (e.lo > b_hi) return 1;
  }
  throw Error(ErrorCode::Inconclusive, "chord vs C*eps unresolved");
}

// floor(2 pi / gamma).
Int floor_two_pi_over(const Rat& gamma) {
  for (unsigned bits = 128; bits <= (1u << 20); bits *= 2) {
    const RealEnclosure pi = pi_enclosure(bits);
    Int a = floor_of(2 * pi.lo / gamma);
    Int b = floor_of(2 * pi.hi / gamma);
    if (a == b) return a;
  }
  throw Error(ErrorCode::Inconclusive, "floor of 2 pi / gamma unresolved");
}

// Everything the empirical constants need about one denominator d:
// `allowed[s]` says whether Sigma = s (mod d) makes every no-hit instance
// collapse, `theta_need[a]` is the largest first hit index among instances
// whose collapse multiplier is a (0 when none need one).
struct DenomTable {
  long d = 1;
  std::vector<char> good;        // chord(r/d) < eps
  std::vector<char> no_hit_a;    // some instance with multiplier a has no net hit
  std::vector<long> theta_need;  // per multiplier a
  std::vector<char> allowed;     // per Sigma residue
};

std::vector<std::pair<long, long>> residue_pairs(long d, const ResidueRanges& ranges) {
  std::vector<char> seen(static_cast<std::size_t>(d * d), 0);
  std::vector<std::pair<long, long>> out;
  auto add = [&](long g, long s) {
    const std::size_t key = static_cast<std::size_t>(g * d + s);
    if (!seen[key]) {
      seen[key] = 1;
      out.emplace_back(g, s);
    }
  };
  auto add_hl = [&](long h, long l) {
    const long g = (h * l) % d;
    if (ranges.s_one) add(g, 1 % d);
    if (ranges.s_h) add(g, h);
  };
  if (ranges.universal) {
    for (long h = 0; h < d; ++h)
      for (long l = 0; l < d; ++l) add_hl(h, l);
  } else {
    for (long H : ranges.H)
      for (long L : ranges.L) add_hl(((H % d) + d) % d, ((L % d) + d) % d);
  }
  return out;
}

DenomTable build_denom_table(long d, const Rat& eps, const ResidueRanges& ranges, const Precision& p) {
  DenomTable t;
  t.d = d;
  t.good.assign(static_cast<std::size_t>(d), 0);
  for (long r = 0; r < d; ++r) t.good[r] = chord_lt(dist_to_Z(UAngle(Int(r), Int(d))), eps, p) ? 1 : 0;

  std::vector<long> units;
  if (d == 1) {
    units.push_back(0);
  } else {
    for (long k = 1; k < d; ++k)
      if (std::gcd(k, d) == 1) units.push_back(k);
  }

  std::vector<char> present(static_cast<std::size_t>(d * d), 0);
  for (const auto& [g, s] : residue_pairs(d, ranges)) {
    for (long k : units) present[static_cast<std::size_t>(((k * g) % d) * d + (k * s) % d)] = 1;
  }

  t.no_hit_a.assign(static_cast<std::size_t>(d), 0);
  t.theta_need.assign(static_cast<std::size_t>(d), 0);
  for (long a = 0; a < d; ++a) {
    for (long b = 0; b < d; ++b) {
      if (!present[static_cast<std::size_t>(a * d + b)]) continue;
      long first = 0;
      for (long j = 1; j <= d; ++j) {
        if (t.good[static_cast<std::size_t>((a * j + b) % d)]) {
          first = j;
          break;
        }
      }
      if (first == 0) {
        t.no_hit_a[a] = 1;
      } else {
        t.theta_need[a] = std::max(t.theta_need[a], first);
      }
    }
  }

  t.allowed.assign(static_cast<std::size_t>(d), 1);
  for (long s = 0; s < d; ++s) {
    for (long a = 0; a < d && t.allowed[s]; ++a) {
      if (t.no_hit_a[a] && !t.good[static_cast<std::size_t>((a * s) % d)]) t.allowed[s] = 0;
    }
  }
  return t;
}

struct GridTables {
  std::vector<DenomTable> by_d;

  bool valid_residues(const std::vector<long>& residue_of_sigma) const {
    for (std::size_t i = 0; i < by_d.size(); ++i) {
      if (!by_d[i].allowed[residue_of_sigma[i]]) return false;
    }
    return true;
  }

  std::vector<long> residues(const Int& sigma) const {
    std::vector<long> out(by_d.size());
    for (std::size_t i = 0; i < by_d.size(); ++i) out[i] = to_i64(mod_floor(sigma, Int(by_d[i].d)));
    return out;
  }

  bool valid(const Int& sigma) const { return valid_residues(residues(sigma)); }

  Int theta(const Int& sigma) const {
    const auto res = residues(sigma);
    long theta = 1;
    for (std::size_t i = 0; i < by_d.size(); ++i) {
      const DenomTable& t = by_d[i];
      for (long a = 0; a < t.d; ++a) {
        if (t.theta_need[a] > 0 && !t.good[static_cast<std::size_t>((a * res[i]) % t.d)])
          theta = std::max(theta, t.theta_need[a]);
      }
    }
    return Int(theta);
  }

  // lcm over d of the smallest t | d whose multiples are all allowed; always valid.
  Int exact_requirement() const {
    Int out = 1;
    for (const DenomTable& t : by_d) {
      for (long step = 1; step <= t.d; ++step) {
        if (t.d % step != 0) continue;
        bool ok = true;
        for (long m = 0; m < t.d && ok; m += step) ok = t.allowed[m] != 0;
        if (ok) {
          out = lcm_of(out, Int(step));
          break;
        }
      }
    }
    return out;
  }
};

void check_grid_args(const Rat& eps, long grid) {
  if (eps <= 0) throw Error(ErrorCode::Precondition, "eps must be positive");
  if (grid < 1) throw Error(ErrorCode::Precondition, "grid_denom_max must be >= 1");
}

GridTables build_tables_serial(const Rat& eps, long grid, const ResidueRanges& ranges, const Precision& p) {
  check_grid_args(eps, grid);
  GridTables g;
  g.by_d.reserve(static_cast<std::size_t>(grid));
  for (long d = 1; d <= grid; ++d) g.by_d.push_back(build_denom_table(d, eps, ranges, p));
  return g;
}

GridTables build_tables_parallel(const Rat& eps, long grid, const ResidueRanges& ranges, const Precision& p) {
  check_grid_args(eps, grid);
  GridTables g;
  g.by_d.resize(static_cast<std::size_t>(grid));
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (long d = grid; d >= 1; --d) {
    try {
      g.by_d[static_cast<std::size_t>(d - 1)] = build_denom_table(d, eps, ranges, p);
    } catch (...) {
#pragma omp critical
      failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return g;
}

MinimalConstants search_minimal(const GridTables& g, unsigned long budget) {
  const Int fallback = g.exact_requirement();
  const unsigned long limit =
      fallback.fits_ulong_p() ? std::min<unsigned long>(fallback.get_ui(), budget) : budget;
  std::vector<long> res(g.by_d.size());
  for (unsigned long s = 1; s <= limit; ++s) {
    for (std::size_t i = 0; i < g.by_d.size(); ++i) res[i] = static_cast<long>(s % g.by_d[i].d);
    if (g.valid_residues(res)) {
      const Int sigma(s);
      return MinimalConstants{sigma, g.theta(sigma), true};
    }
  }
  return MinimalConstants{fallback, g.theta(fallback), false};
}

}  // namespace

const char* track_name(Track t) { return t == Track::Paper ? "paper" : "empirical"; }

Track parse_track(std::string_view text) {
  if (text == "paper") return Track::Paper;
  if (text == "empirical") return Track::Empirical;
  throw Error(ErrorCode::Parse, "unknown track '" + std::string(text) + "'");
}

NetConstants net_constants(unsigned precision_bits) {
  const RealEnclosure pi = pi_enclosure(precision_bits);
  return NetConstants{RealEnclosure{pi.lo / 2, pi.hi / 2}, RealEnclosure{2 * pi.lo, 2 * pi.hi}};
}

Int kappa_for(const Rat& epsilon) {
  if (epsilon <= 0) throw Error(ErrorCode::Precondition, "eps must be positive");
  return floor_four_pi_cubed_over(epsilon, Int(1));
}

DichotomyParams dichotomy_params(const Rat& epsilon, unsigned long kappa_cap) {
  const Int kappa = kappa_for(epsilon);
  if (kappa == 0) throw Error(ErrorCode::EpsilonTooLarge, "kappa = floor(4 pi^3 / eps) is 0 for eps = " + to_string(epsilon));
  if (kappa > kappa_cap) {
    throw Error(ErrorCode::SizeLimit, "kappa = " + to_string(kappa) + " exceeds cap " + std::to_string(kappa_cap));
  }
  DichotomyParams out;
  out.epsilon = epsilon;
  out.kappa = kappa;
  out.Sigma = factorial(kappa.get_ui());
  out.Theta = kappa * floor_four_pi_cubed_over(epsilon, out.Sigma);
  out.track = Track::Paper;
  return out;
}

Int approx_power(const UAngle& mu, const Rat& gamma, const Rat& epsilon, const UAngle& nu, const Precision& p) {
  if (gamma <= 0) throw Error(ErrorCode::Precondition, "gamma must be positive");
  const DistZ dmu = dist_to_Z(mu);
  if (cmp_chord(dmu, gamma, p) <= 0 || cmp_chord(dmu, epsilon, p) >= 0) {
    throw Error(ErrorCode::Precondition, "approx_power needs gamma < |mu - 1| < eps");
  }
  const Int limit = floor_two_pi_over(gamma);
  if (limit > 100000000) throw Error(ErrorCode::SizeLimit, "power search range too large");
  UAngle power = mu;
  for (Int q = 1; q <= limit; ++q) {
    if (cmp_chord_half_pi_times(chord_dist(power, nu), epsilon, p) <= 0) return q;
    power = power + mu;
  }
  throw Error(ErrorCode::NotFound, "no power of mu within C*eps of nu");
}

DichotomyOutcome dichotomy(const UAngle& lambda, const Int& H, const Int& L, const Int& S, const Rat& epsilon,
                           const DichotomyParams& params, const Precision& p) {
  if (H < 1 || L < 1) throw Error(ErrorCode::Precondition, "H and L must be positive");
  const Int collapse_n = H * params.Sigma * L;
  const DistZ collapse_d = dist_to_Z(reduce(lambda, collapse_n));
  if (chord_lt(collapse_d, epsilon, p)) {
    return DichotomyOutcome{PowerCollapse{collapse_n}, certify_below(collapse_d, epsilon, p)};
  }

  const UAngle step = reduce(lambda, H * L);
  const Int period = step.denom();
  const Int limit = params.Theta < period ? params.Theta : period;
  UAngle angle = reduce(lambda, S);
  for (Int j = 1; j <= limit; ++j) {
    angle = angle + step;
    const DistZ d = dist_to_Z(angle);
    if (chord_lt(d, epsilon, p)) {
      return DichotomyOutcome{NetHit{j, H * L * j + S}, certify_below(d, epsilon, p)};
    }
  }
  throw Error(ErrorCode::NoBranch, "neither collapse nor net hit for lambda = " + lambda.str());
}

std::vector<UAngle> rational_grid(long denom_max) {
  std::vector<UAngle> out;
  for (long d = 1; d <= denom_max; ++d) {
    for (long k = 0; k < d; ++k) {
      if (std::gcd(k, d) == 1 || (d == 1 && k == 0)) out.emplace_back(Int(k), Int(d));
    }
  }
  return out;
}

MinimalConstants minimal_constants(const Rat& epsilon, long grid, const ResidueRanges& ranges, const Precision& p,
                                   unsigned long budget) {
  return search_minimal(build_tables_parallel(epsilon, grid, ranges, p), budget);
}

MinimalConstants minimal_constants_serial(const Rat& epsilon, long grid, const ResidueRanges& ranges,
                                          const Precision& p, unsigned long budget) {
  return search_minimal(build_tables_serial(epsilon, grid, ranges, p), budget);
}

MinimalConstants constants_with_divisor(const Rat& epsilon, long grid, const ResidueRanges& ranges,
                                        const Int& divisor, const Precision& p) {
  const GridTables g = build_tables_parallel(epsilon, grid, ranges, p);
  const MinimalConstants base = search_minimal(g, 2000000);
  Int sigma = lcm_of(base.Sigma, divisor);
  if (!g.valid(sigma)) sigma = lcm_of(g.exact_requirement(), divisor);
  return MinimalConstants{sigma, g.theta(sigma), false};
}

std::optional<Int> theta_for_sigma(const Rat& epsilon, long grid, const ResidueRanges& ranges, const Int& sigma,
                                   const Precision& p) {
  const GridTables g = build_tables_parallel(epsilon, grid, ranges, p);
  if (!g.valid(sigma)) return std::nullopt;
  return g.theta(sigma);
}

}  // namespace bohr
