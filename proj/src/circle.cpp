#include "bohr/circle.hpp"

#include <mpfr.h>

#include <cstdint>
#include <unordered_map>

namespace bohr {

namespace {

// RAII wrapper for an mpfr_t at a fixed precision.
class Mpfr {
 public:
  explicit Mpfr(mpfr_prec_t bits) { mpfr_init2(v_, bits); }
  ~Mpfr() { mpfr_clear(v_); }
  Mpfr(const Mpfr&) = delete;
  Mpfr& operator=(const Mpfr&) = delete;
  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }

 private:
  mpfr_t v_;
};

Rat to_rat(const Mpfr& x) {
  Rat r;
  mpfr_get_q(r.get_mpq_t(), x.get());
  return r;
}

const Rat kHalf(1, 2);
const Rat kSixth(1, 6);

// 2 sin(pi d) when it is rational (Niven: only these three points in [0, 1/2]).
bool exact_chord(const Rat& d, Rat& value) {
  if (d == 0) {
    value = 0;
    return true;
  }
  if (d == kSixth) {
    value = 1;
    return true;
  }
  if (d == kHalf) {
    value = 2;
    return true;
  }
  return false;
}

ChordEnclosure chord_at(const Rat& d, mpfr_prec_t work_bits, unsigned nominal_bits) {
  Mpfr pi_lo(work_bits), pi_hi(work_bits), x(work_bits), s(work_bits), half_pi_lo(work_bits);
  mpfr_const_pi(pi_lo.get(), MPFR_RNDD);
  mpfr_const_pi(pi_hi.get(), MPFR_RNDU);
  mpfr_div_2ui(half_pi_lo.get(), pi_lo.get(), 1, MPFR_RNDD);

  ChordEnclosure e;
  e.precision_bits = nominal_bits;

  // sin is increasing on [0, pi/2] and pi*d lies there.
  mpfr_mul_q(x.get(), pi_lo.get(), d.get_mpq_t(), MPFR_RNDD);
  mpfr_sin(s.get(), x.get(), MPFR_RNDD);
  if (mpfr_sgn(s.get()) < 0) mpfr_set_zero(s.get(), 1);
  e.lo = to_rat(s) * 2;

  mpfr_mul_q(x.get(), pi_hi.get(), d.get_mpq_t(), MPFR_RNDU);
  if (mpfr_cmp(x.get(), half_pi_lo.get()) >= 0) {
    e.hi = 2;
  } else {
    mpfr_sin(s.get(), x.get(), MPFR_RNDU);
    e.hi = to_rat(s) * 2;
    if (e.hi > 2) e.hi = 2;
  }
  return e;
}

struct PairHash {
  std::size_t operator()(const std::pair<std::uint64_t, std::uint64_t>& k) const noexcept {
    return std::hash<std::uint64_t>()(k.first * 0x9E3779B97F4A7C15ULL ^ k.second);
  }
};

// Per-thread memo of start-precision enclosures for small-denominator
// distances; grid audits revisit the same few thousand values constantly.
const ChordEnclosure* cached_chord(const Rat& d, unsigned bits) {
  thread_local std::unordered_map<std::pair<std::uint64_t, std::uint64_t>, ChordEnclosure, PairHash> cache;
  thread_local unsigned cache_bits = 0;
  if (!d.get_num().fits_ulong_p() || !d.get_den().fits_ulong_p()) return nullptr;
  if (cache_bits != bits || cache.size() > (1u << 20)) {
    cache.clear();
    cache_bits = bits;
  }
  const auto key = std::make_pair<std::uint64_t, std::uint64_t>(d.get_num().get_ui(), d.get_den().get_ui());
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, chord(DistZ{d}, bits)).first;
  return &it->second;
}

}  // namespace

UAngle::UAngle(Int numer, Int denom) {
  if (denom <= 0) throw Error(ErrorCode::Precondition, "angle denominator must be positive");
  Rat r(numer, denom);
  r.canonicalize();
  num_ = mod_floor(r.get_num(), r.get_den());
  den_ = r.get_den();
  if (num_ == 0) den_ = 1;
}

UAngle::UAngle(const Rat& turns) : UAngle(turns.get_num(), turns.get_den()) {}

std::string UAngle::str() const { return to_string(num_) + "/" + to_string(den_); }

UAngle UAngle::parse(std::string_view text) { return UAngle(parse_rational(text)); }

UAngle operator+(const UAngle& a, const UAngle& b) { return UAngle(a.turns() + b.turns()); }
UAngle operator-(const UAngle& a, const UAngle& b) { return UAngle(a.turns() - b.turns()); }
UAngle operator-(const UAngle& a) { return UAngle(Rat(-a.turns())); }

UAngle reduce(const UAngle& theta, const Int& n) {
  if (theta.is_zero()) return theta;
  Int m = n * theta.numer();
  m = mod_floor(m, theta.denom());
  return UAngle(m, theta.denom());
}

DistZ dist_to_Z(const UAngle& theta) {
  const Rat t = theta.turns();
  const Rat u = 1 - t;
  return DistZ{t <= u ? t : u};
}

ChordEnclosure chord(const DistZ& d, unsigned precision_bits) {
  if (precision_bits < 8) throw Error(ErrorCode::Precondition, "chord needs at least 8 bits of precision");
  if (d.value < 0 || d.value > kHalf) throw Error(ErrorCode::Precondition, "distance to Z must lie in [0, 1/2]");
  Rat exact;
  if (exact_chord(d.value, exact)) return ChordEnclosure{exact, exact, precision_bits};

  const Rat max_width = Rat(2) / (Int(1) << precision_bits);
  mpfr_prec_t work = static_cast<mpfr_prec_t>(precision_bits) + 32;
  for (;;) {
    ChordEnclosure e = chord_at(d.value, work, precision_bits);
    if (e.hi - e.lo <= max_width) return e;
    work *= 2;
  }
}

ChordEnclosure pow_chord(const UAngle& theta, const Int& n, unsigned precision_bits) {
  return chord(dist_to_Z(reduce(theta, n)), precision_bits);
}

ChordOrder compare_chord(const ChordEnclosure& e, const Rat& bound) {
  if (e.hi < bound) return ChordOrder::Below;
  if (e.lo > bound) return ChordOrder::Above;
  return ChordOrder::Inconclusive;
}

int cmp_chord(const DistZ& d, const Rat& bound, const Precision& p) {
  Rat exact;
  if (exact_chord(d.value, exact)) return exact < bound ? -1 : (exact > bound ? 1 : 0);
  if (bound > 2) return -1;
  // 4 d <= chord <= 2 pi d < (44/7) d for 0 < d < 1/2.
  if (4 * d.value >= bound) return 1;
  if (two_pi_upper() * d.value <= bound) return -1;

  for (unsigned bits = p.start_bits; bits <= p.cap_bits; bits *= 2) {
    const ChordEnclosure* cached = bits == p.start_bits ? cached_chord(d.value, bits) : nullptr;
    const ChordEnclosure e = cached ? *cached : chord(d, bits);
    switch (compare_chord(e, bound)) {
      case ChordOrder::Below: return -1;
      case ChordOrder::Above: return 1;
      case ChordOrder::Inconclusive: break;
    }
  }
  throw Error(ErrorCode::Inconclusive, "chord comparison unresolved at " + std::to_string(p.cap_bits) + " bits");
}

RealEnclosure pi_enclosure(unsigned precision_bits) {
  Mpfr lo(precision_bits), hi(precision_bits);
  mpfr_const_pi(lo.get(), MPFR_RNDD);
  mpfr_const_pi(hi.get(), MPFR_RNDU);
  return RealEnclosure{to_rat(lo), to_rat(hi)};
}

}  // namespace bohr
