#include "bohr/numeric.hpp"

#include <cctype>

namespace bohr {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::Parse: return "ParseError";
    case ErrorCode::Precondition: return "PreconditionViolated";
    case ErrorCode::EpsilonTooLarge: return "EpsilonTooLarge";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::NoBranch: return "NoBranch";
    case ErrorCode::Inconclusive: return "Inconclusive";
    case ErrorCode::SizeLimit: return "SizeLimit";
    case ErrorCode::EmptyIntersection: return "EmptyIntersection";
    case ErrorCode::RatioViolation: return "RatioViolation";
    case ErrorCode::Overlap: return "OverlapError";
  }
  return "Error";
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

Int parse_integer(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && body.front() == '-') {
    negative = true;
    body.remove_prefix(1);
  }
  if (!all_digits(body)) throw Error(ErrorCode::Parse, "not a decimal integer: '" + std::string(text) + "'");
  Int value(std::string(body), 10);
  return negative ? Int(-value) : value;
}

Rat parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    throw Error(ErrorCode::Parse, "rational must be written as p/q: '" + std::string(text) + "'");
  }
  Int p = parse_integer(text.substr(0, slash));
  std::string_view qs = text.substr(slash + 1);
  if (!all_digits(qs)) throw Error(ErrorCode::Parse, "bad denominator in '" + std::string(text) + "'");
  Int q(std::string(qs), 10);
  if (q == 0) throw Error(ErrorCode::Parse, "zero denominator in '" + std::string(text) + "'");
  Rat r(p, q);
  r.canonicalize();
  return r;
}

std::string to_string(const Int& value) { return value.get_str(10); }

std::string to_string(const Rat& value) {
  return value.get_num().get_str(10) + "/" + value.get_den().get_str(10);
}

Int floor_of(const Rat& value) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), value.get_num_mpz_t(), value.get_den_mpz_t());
  return q;
}

Int ceil_of(const Rat& value) {
  Int q;
  mpz_cdiv_q(q.get_mpz_t(), value.get_num_mpz_t(), value.get_den_mpz_t());
  return q;
}

Int factorial(unsigned long n) {
  Int f;
  mpz_fac_ui(f.get_mpz_t(), n);
  return f;
}

Int lcm_of(const Int& a, const Int& b) {
  Int l;
  mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return l;
}

Int gcd_of(const Int& a, const Int& b) {
  Int g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

Int mod_floor(const Int& a, const Int& m) {
  Int r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

bool fits_i64(const Int& value) { return value.fits_slong_p(); }

long long to_i64(const Int& value) {
  if (!value.fits_slong_p()) throw Error(ErrorCode::SizeLimit, "integer does not fit in 64 bits");
  return value.get_si();
}

Int from_i64(long long value) { return Int(static_cast<long>(value)); }

}  // namespace bohr
