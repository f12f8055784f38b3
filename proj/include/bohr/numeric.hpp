#pragma once

// Unbounded integers and rationals (GMP) plus the string forms used in every
// file format: integers as decimal strings, rationals as "p/q".

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>

namespace bohr {

using Int = mpz_class;
using Rat = mpq_class;

enum class ErrorCode {
  Parse,
  Precondition,
  EpsilonTooLarge,
  NotFound,
  NoBranch,
  Inconclusive,
  SizeLimit,
  EmptyIntersection,
  RatioViolation,
  Overlap,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Parses "p/q" (q > 0, optional leading '-'). Decimal notation is rejected.
Rat parse_rational(std::string_view text);
/// Parses a decimal integer with optional leading '-'.
Int parse_integer(std::string_view text);

std::string to_string(const Int& value);
/// Always "p/q", also for integers ("3/1").
std::string to_string(const Rat& value);

Int floor_of(const Rat& value);
Int ceil_of(const Rat& value);
Int factorial(unsigned long n);
Int lcm_of(const Int& a, const Int& b);
Int gcd_of(const Int& a, const Int& b);
/// Nonnegative residue of a modulo m (m > 0).
Int mod_floor(const Int& a, const Int& m);

inline Rat make_rat(long p, long q) {
  Rat r(p, q);
  r.canonicalize();
  return r;
}

/// Fits in a signed 64-bit value.
bool fits_i64(const Int& value);
long long to_i64(const Int& value);
Int from_i64(long long value);

}  // namespace bohr
