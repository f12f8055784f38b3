#include "bohr/klapprox.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <random>

namespace bohr {

namespace {

constexpr long kMaxResidueTable = 4000000;

// Largest admissible l1 norm: |a| < c / eps.
long norm_bound(const Rat& epsilon, const Rat& c) {
  if (epsilon <= 0 || c <= 0) throw Error(ErrorCode::Precondition, "eps and c must be positive");
  const Rat ratio = c / epsilon;
  const Int bound = ceil_of(ratio) - 1;
  if (bound < 0) return 0;
  if (!bound.fits_slong_p() || bound > 100000000) throw Error(ErrorCode::SizeLimit, "c / eps too large");
  return bound.get_si();
}

void enumerate(int r, long remaining, IntVec& cur, int pos, std::vector<IntVec>& out, std::size_t cap) {
  if (pos == r) {
    if (std::any_of(cur.begin(), cur.end(), [](long v) { return v != 0; })) {
      if (out.size() >= cap) throw Error(ErrorCode::SizeLimit, "E set exceeds cap of " + std::to_string(cap));
      out.push_back(cur);
    }
    return;
  }
  for (long v = -remaining; v <= remaining; ++v) {
    cur[pos] = v;
    enumerate(r, remaining - std::labs(v), cur, pos + 1, out, cap);
  }
  cur[pos] = 0;
}

std::vector<UAngle> fold(const std::vector<UAngle>& lambdas, const Int& H) {
  std::vector<UAngle> out;
  out.reserve(lambdas.size());
  for (const UAngle& t : lambdas) out.push_back(reduce(t, H));
  return out;
}

// Angles written over their common denominator D: theta_i = n_i / D.
struct CommonDenom {
  long D = 1;
  std::vector<long> n;
};

std::optional<CommonDenom> common_denominator(const std::vector<UAngle>& angles) {
  Int D = 1;
  for (const UAngle& t : angles) D = lcm_of(D, t.denom());
  if (D > kMaxResidueTable) return std::nullopt;
  CommonDenom cd;
  cd.D = D.get_si();
  for (const UAngle& t : angles) cd.n.push_back(Int(t.numer() * (D / t.denom())).get_si());
  return cd;
}

// Margin Q * chord + eps * norm - c, enclosed.
std::pair<Rat, Rat> margin(const DistZ& d, long norm, const Rat& epsilon, const Rat& Q, const Rat& c,
                           const Precision& p) {
  const ChordEnclosure e = chord(d, p.start_bits);
  const Rat shift = epsilon * norm - c;
  return {Q * e.lo + shift, Q * e.hi + shift};
}

// True when Q * chord(d) + eps * norm >= c, certified.
bool vector_ok(const DistZ& d, long norm, const Rat& epsilon, const Rat& Q, const Rat& c, const Precision& p) {
  const Rat need = c - epsilon * norm;
  if (need <= 0) return true;
  return cmp_chord(d, need / Q, p) >= 0;
}

// Breadth-first distances in Z/D under steps +-n_i (skipping index `skip`),
// truncated at `limit`. parent[x] encodes the last step as +-(i+1).
struct Bfs {
  std::vector<long> dist;
  std::vector<int> step;
};

Bfs bfs(const CommonDenom& cd, long limit, int skip) {
  Bfs b;
  b.dist.assign(static_cast<std::size_t>(cd.D), -1);
  b.step.assign(static_cast<std::size_t>(cd.D), 0);
  std::deque<long> queue{0};
  b.dist[0] = 0;
  while (!queue.empty()) {
    const long x = queue.front();
    queue.pop_front();
    if (b.dist[x] >= limit) continue;
    for (int i = 0; i < static_cast<int>(cd.n.size()); ++i) {
      if (i == skip) continue;
      for (int sign : {1, -1}) {
        const long y = ((x + sign * cd.n[i]) % cd.D + cd.D) % cd.D;
        if (b.dist[y] < 0) {
          b.dist[y] = b.dist[x] + 1;
          b.step[y] = sign * (i + 1);
          queue.push_back(y);
        }
      }
    }
  }
  return b;
}

IntVec path_vector(const Bfs& b, const CommonDenom& cd, long x) {
  IntVec a(cd.n.size(), 0);
  while (x != 0) {
    const int s = b.step[x];
    const int i = std::abs(s) - 1;
    const int sign = s > 0 ? 1 : -1;
    a[i] += sign;
    x = ((x - sign * cd.n[i]) % cd.D + cd.D) % cd.D;
  }
  return a;
}

// Every residue reachable by a nonzero vector of norm <= limit, with the
// smallest such norm and a vector attaining it.
struct Reach {
  long residue;
  long norm;
  IntVec vec;
};

std::vector<Reach> minimal_reach(const CommonDenom& cd, long limit, bool want_vectors) {
  std::vector<Reach> out;
  if (limit < 1) return out;
  const Bfs full = bfs(cd, limit, -1);
  for (long x = 1; x < cd.D; ++x) {
    if (full.dist[x] > 0) out.push_back({x, full.dist[x], want_vectors ? path_vector(full, cd, x) : IntVec{}});
  }
  // Residue 0: a nonzero vector with a_i = k >= 1 for some i, the rest
  // avoiding coordinate i.
  long best = -1;
  IntVec best_vec;
  for (int i = 0; i < static_cast<int>(cd.n.size()); ++i) {
    const Bfs partial = bfs(cd, limit, i);
    for (long k = 1; k <= limit; ++k) {
      if (best >= 0 && k >= best) break;
      const long target = ((-k * (cd.n[i] % cd.D)) % cd.D + cd.D) % cd.D;
      const long rest = partial.dist[target];
      if (rest < 0 || k + rest > limit) continue;
      if (best < 0 || k + rest < best) {
        best = k + rest;
        if (want_vectors) {
          best_vec = path_vector(partial, cd, target);
          best_vec[i] += k;
        }
      }
    }
  }
  if (best >= 0) out.push_back({0, best, best_vec});
  return out;
}

DistZ residue_dist(long x, long D) { return DistZ{make_rat(std::min(x, D - x), D)}; }

}  // namespace

long l1_norm(const IntVec& a) {
  long s = 0;
  for (long v : a) s += std::labs(v);
  return s;
}

std::vector<IntVec> e_set(const Rat& epsilon, int r, const Rat& c, std::size_t cap) {
  if (r < 1) throw Error(ErrorCode::Precondition, "r must be positive");
  const long bound = norm_bound(epsilon, c);
  std::vector<IntVec> out;
  IntVec cur(static_cast<std::size_t>(r), 0);
  enumerate(r, bound, cur, 0, out, cap);
  return out;
}

Int l1_ball_count(int r, long radius) {
  Int total = 0;
  for (int k = 0; k <= r; ++k) {
    Int a, b;
    mpz_bin_uiui(a.get_mpz_t(), static_cast<unsigned long>(r), static_cast<unsigned long>(k));
    mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(radius), static_cast<unsigned long>(k));
    total += (Int(1) << k) * a * b;
  }
  return total - 1;
}

IndepReport check_condition_enumerated(const std::vector<UAngle>& lambdas, const Rat& epsilon, const Rat& Q,
                                       const Rat& c, const Int& H, const Precision& p) {
  if (Q < 1) throw Error(ErrorCode::Precondition, "Q must be >= 1");
  IndepReport rep;
  rep.epsilon = epsilon;
  rep.Q = Q;
  rep.c = c;
  const auto folded = fold(lambdas, H);
  for (const IntVec& a : e_set(epsilon, static_cast<int>(lambdas.size()), c)) {
    UAngle x;
    for (std::size_t i = 0; i < a.size(); ++i) x = x + reduce(folded[i], Int(a[i]));
    const DistZ d = dist_to_Z(x);
    const long norm = l1_norm(a);
    if (!vector_ok(d, norm, epsilon, Q, c, p)) rep.passed = false;
    const auto [lo, hi] = margin(d, norm, epsilon, Q, c, p);
    if (!rep.worst_vec || lo < rep.worst_margin_lo) {
      rep.worst_vec = a;
      rep.worst_margin_lo = lo;
      rep.worst_margin_hi = hi;
    }
  }
  return rep;
}

IndepReport check_condition(const std::vector<UAngle>& lambdas, const Rat& epsilon, const Rat& Q, const Rat& c,
                            const Int& H, const Precision& p) {
  if (Q < 1) throw Error(ErrorCode::Precondition, "Q must be >= 1");
  const auto cd = common_denominator(fold(lambdas, H));
  if (!cd) return check_condition_enumerated(lambdas, epsilon, Q, c, H, p);
  IndepReport rep;
  rep.epsilon = epsilon;
  rep.Q = Q;
  rep.c = c;
  for (const Reach& reach : minimal_reach(*cd, norm_bound(epsilon, c), true)) {
    const DistZ d = residue_dist(reach.residue, cd->D);
    if (!vector_ok(d, reach.norm, epsilon, Q, c, p)) rep.passed = false;
    const auto [lo, hi] = margin(d, reach.norm, epsilon, Q, c, p);
    if (!rep.worst_vec || lo < rep.worst_margin_lo) {
      rep.worst_vec = reach.vec;
      rep.worst_margin_lo = lo;
      rep.worst_margin_hi = hi;
    }
  }
  return rep;
}

bool condition_holds(const std::vector<UAngle>& lambdas, const Rat& epsilon, const Rat& Q, const Rat& c,
                     const Int& H, const Precision& p) {
  if (Q < 1) throw Error(ErrorCode::Precondition, "Q must be >= 1");
  const auto cd = common_denominator(fold(lambdas, H));
  if (!cd) return check_condition_enumerated(lambdas, epsilon, Q, c, H, p).passed;
  for (const Reach& reach : minimal_reach(*cd, norm_bound(epsilon, c), false)) {
    if (!vector_ok(residue_dist(reach.residue, cd->D), reach.norm, epsilon, Q, c, p)) return false;
  }
  return true;
}

std::optional<Int> simultaneous_hit(const std::vector<UAngle>& lambdas, const std::vector<UAngle>& mus,
                                    const Rat& epsilon, const Int& Q, const Int& H, const Precision& p) {
  if (lambdas.empty() || lambdas.size() != mus.size()) {
    throw Error(ErrorCode::Precondition, "lambdas and mus must have equal nonzero length");
  }
  const auto folded = fold(lambdas, H);
  Int period = 1;
  for (const UAngle& t : folded) period = lcm_of(period, t.denom());
  const Int limit = Q < period ? Q : period;
  std::vector<UAngle> cur(folded.size());
  for (Int q = 1; q <= limit; ++q) {
    bool all = true;
    for (std::size_t i = 0; i < folded.size(); ++i) {
      cur[i] = cur[i] + folded[i];
      if (all && !chord_lt(chord_dist(cur[i], mus[i]), epsilon, p)) all = false;
    }
    if (all) return q;
  }
  return std::nullopt;
}

std::vector<KLInstance> kl_instances(int r, int trials, long denom_max, std::uint64_t seed) {
  if (trials < 1) throw Error(ErrorCode::Precondition, "trials must be >= 1");
  if (r < 1 || denom_max < 1) throw Error(ErrorCode::Precondition, "r and denom_max must be positive");
  std::mt19937_64 rng(seed);
  auto draw = [&]() {
    const long d = 1 + static_cast<long>(rng() % static_cast<std::uint64_t>(denom_max));
    const long k = static_cast<long>(rng() % static_cast<std::uint64_t>(d));
    return UAngle(Int(k), Int(d));
  };
  const std::vector<Rat> eps_ladder{Rat(1, 2), Rat(1, 4), Rat(1, 8)};
  const std::vector<long> q_ladder{1, 4, 16, 64, 256};
  std::vector<KLInstance> out;
  for (int t = 0; t < trials; ++t) {
    std::vector<UAngle> lambdas, conj, other;
    for (int i = 0; i < r; ++i) lambdas.push_back(draw());
    for (const UAngle& l : lambdas) conj.push_back(-l);
    for (int i = 0; i < r; ++i) other.push_back(draw());
    for (const auto* mus : {&conj, &other}) {
      for (const Rat& e : eps_ladder)
        for (long q : q_ladder) out.push_back(KLInstance{lambdas, *mus, e, Int(q)});
    }
  }
  return out;
}

std::vector<Rat> calibration_ladder() {
  std::vector<Rat> out;
  for (long k = 1; k <= 256; ++k) out.push_back(make_rat(k, 16));
  return out;
}

Rat calibrate_c(int r, int trials, long denom_max, std::uint64_t seed, const Precision& p) {
  const auto instances = kl_instances(r, trials, denom_max, seed);
  const auto ladder = calibration_ladder();
  std::vector<long> highest(instances.size(), -1);

#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const KLInstance& in = instances[i];
    if (simultaneous_hit(in.lambdas, in.mus, in.epsilon, in.Q, Int(1), p)) continue;
    // Largest ladder index at which the condition still (wrongly) passes.
    long lo = -1, hi = static_cast<long>(ladder.size());
    while (hi - lo > 1) {
      const long mid = (lo + hi) / 2;
      if (condition_holds(in.lambdas, in.epsilon, Rat(in.Q), ladder[mid], Int(1), p)) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    highest[i] = lo;
  }

  const long worst = *std::max_element(highest.begin(), highest.end());
  if (worst + 1 >= static_cast<long>(ladder.size())) {
    throw Error(ErrorCode::NotFound, "no sound c on the calibration ladder");
  }
  return ladder[static_cast<std::size_t>(worst + 1)];
}

}  // namespace bohr
