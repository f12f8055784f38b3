#pragma once

// Exact circle arithmetic. An angle is a rational number of turns in [0,1);
// the point it names on the unit circle is e^{2 i pi theta}. Chord lengths
// |e^{2 i pi x} - 1| = 2 sin(pi {x}) are irrational except at {x} in
// {0, 1/6, 1/2}, so they are handled through certified enclosures.

#include "bohr/numeric.hpp"

#include <string>

namespace bohr {

struct Precision {
  unsigned start_bits = 128;
  unsigned cap_bits = 4096;
};

/// Rational angle in turns, canonical: 0 <= numer < denom, gcd = 1.
class UAngle {
 public:
  UAngle() : num_(0), den_(1) {}
  UAngle(Int numer, Int denom);
  explicit UAngle(const Rat& turns);

  const Int& numer() const { return num_; }
  const Int& denom() const { return den_; }
  Rat turns() const { return Rat(num_, den_); }
  bool is_zero() const { return num_ == 0; }
  std::string str() const;

  static UAngle parse(std::string_view text);

  friend bool operator==(const UAngle& a, const UAngle& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

 private:
  Int num_;
  Int den_;
};

UAngle operator+(const UAngle& a, const UAngle& b);
UAngle operator-(const UAngle& a, const UAngle& b);
UAngle operator-(const UAngle& a);

/// n * theta mod 1, computed as (n * numer mod denom) / denom. n may be negative.
UAngle reduce(const UAngle& theta, const Int& n);

/// Distance of a real number to the nearest integer, exact, in [0, 1/2].
struct DistZ {
  Rat value;
};

DistZ dist_to_Z(const UAngle& theta);

/// Certified real enclosure lo <= 2 sin(pi d) <= hi with dyadic endpoints.
struct ChordEnclosure {
  Rat lo;
  Rat hi;
  unsigned precision_bits = 0;

  bool exact() const { return lo == hi; }
};

/// Enclosure of 2 sin(pi d) of width <= 2^(1 - precision_bits).
ChordEnclosure chord(const DistZ& d, unsigned precision_bits);

/// |lambda^n - 1| for lambda = e^{2 i pi theta}.
ChordEnclosure pow_chord(const UAngle& theta, const Int& n, unsigned precision_bits);

enum class ChordOrder { Below, Above, Inconclusive };

ChordOrder compare_chord(const ChordEnclosure& e, const Rat& bound);

/// Certified three-way comparison of 2 sin(pi d) with a rational bound,
/// doubling precision from p.start_bits up to p.cap_bits. Returns -1, 0, +1;
/// 0 only when the chord is rational and equals the bound. Throws
/// Error(Inconclusive) past the cap.
int cmp_chord(const DistZ& d, const Rat& bound, const Precision& p = {});

inline bool chord_lt(const DistZ& d, const Rat& bound, const Precision& p = {}) {
  return cmp_chord(d, bound, p) < 0;
}
inline bool chord_gt(const DistZ& d, const Rat& bound, const Precision& p = {}) {
  return cmp_chord(d, bound, p) > 0;
}

/// |lambda - mu| as a distance on the circle: chord of the angle difference.
inline DistZ chord_dist(const UAngle& a, const UAngle& b) { return dist_to_Z(a - b); }

/// Rational enclosure of a real constant.
struct RealEnclosure {
  Rat lo;
  Rat hi;
};

RealEnclosure pi_enclosure(unsigned precision_bits);

/// Upper rational proxy for 2 pi used in growth bounds.
inline Rat two_pi_upper() { return Rat(44, 7); }
/// Upper rational proxy for M = 2 M_2 = 4 pi used in witness obligations.
inline Rat four_pi_upper() { return Rat(88, 7); }

}  // namespace bohr
