// Scalar layer: the library is generic over the coordinate field.
//
// Three scalar types are used throughout:
//   double          - everyday lane (unit tests, shallow games, measurements)
//   mpreal          - deep game lane; fixed 480-digit MPFR floats, enough for
//                     ~160 rounds of radius shrinking plus orbit error growth
//   rational/bigint - exact lane for piecewise-linear circle maps and tilings
//
// Values that cross a process boundary (transcripts) are serialized exactly:
// doubles as C hex-floats, mpreals as (hex mantissa, exponent) pairs taken
// from the underlying binary representation, rationals as num/den digits.

#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace schmidt {

namespace bmp = boost::multiprecision;

inline constexpr unsigned kMpDigits10 = 480;
using mpreal = bmp::number<bmp::mpfr_float_backend<kMpDigits10>, bmp::et_off>;
using bigint = bmp::cpp_int;
using rational = bmp::cpp_rational;

// Comparison tolerance for radius laws and boundary predicates (relative).
inline constexpr double kRelTol = 1e-12;

template <class R>
inline double to_double(const R& x) {
  return static_cast<double>(x);
}
inline double to_double(const rational& x) { return x.template convert_to<double>(); }

// log2 of |x| as a double; works for values far outside double range.
inline double log2_abs(double x) { return std::log2(std::fabs(x)); }
inline double log2_abs(const mpreal& x) {
  if (x == 0) return -1.0e18;
  mpfr_exp_t e = mpfr_get_exp(x.backend().data());
  mpreal m = abs(x);
  mpfr_set_exp(m.backend().data(), 0);  // m in [1/2, 1)
  return static_cast<double>(e) + std::log2(static_cast<double>(m));
}
inline double log2_abs(const rational& x) {
  if (x == 0) return -1.0e18;
  return static_cast<double>(log2(mpreal(abs(x))));
}

// ---- exact serialization ----------------------------------------------------

inline std::string double_to_hex(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%la", x);
  return buf;
}
inline double double_from_hex(const std::string& s) {
  return std::strtod(s.c_str(), nullptr);
}

inline std::string mpreal_to_hex(const mpreal& x) {
  if (x == 0) return "0";
  mpz_t z;
  mpz_init(z);
  mpfr_exp_t e = mpfr_get_z_2exp(z, x.backend().data());
  char* raw = mpz_get_str(nullptr, 16, z);
  std::string out = std::string(raw) + "p" + std::to_string(static_cast<long long>(e));
  void (*freefunc)(void*, size_t);
  mp_get_memory_functions(nullptr, nullptr, &freefunc);
  freefunc(raw, std::strlen(raw) + 1);
  mpz_clear(z);
  return out;
}
inline mpreal mpreal_from_hex(const std::string& s) {
  if (s == "0") return mpreal(0);
  auto p = s.rfind('p');
  if (p == std::string::npos) throw std::invalid_argument("bad mpreal literal: " + s);
  mpz_t z;
  mpz_init(z);
  if (mpz_set_str(z, s.substr(0, p).c_str(), 16) != 0) {
    mpz_clear(z);
    throw std::invalid_argument("bad mpreal mantissa: " + s);
  }
  long long e = std::stoll(s.substr(p + 1));
  mpreal out;
  mpfr_set_z_2exp(out.backend().data(), z, static_cast<mpfr_exp_t>(e), MPFR_RNDN);
  mpz_clear(z);
  return out;
}

template <class R>
inline std::string scalar_to_text(const R& x);
template <>
inline std::string scalar_to_text<double>(const double& x) { return double_to_hex(x); }
template <>
inline std::string scalar_to_text<mpreal>(const mpreal& x) { return mpreal_to_hex(x); }

template <class R>
inline R scalar_from_text(const std::string& s);
template <>
inline double scalar_from_text<double>(const std::string& s) { return double_from_hex(s); }
template <>
inline mpreal scalar_from_text<mpreal>(const std::string& s) { return mpreal_from_hex(s); }

template <class R>
inline const char* scalar_name();
template <>
inline const char* scalar_name<double>() { return "double"; }
template <>
inline const char* scalar_name<mpreal>() { return "mp"; }

// ---- deterministic RNG ------------------------------------------------------
//
// std::mt19937_64 is portable but the standard distributions are not; all
// sampling goes through the helpers below so transcripts replay bit-identically
// on any platform.

struct Rng {
  std::uint64_t s;

  explicit Rng(std::uint64_t seed) : s(seed + 0x9e3779b97f4a7c15ULL) {}

  std::uint64_t next() {
    std::uint64_t z = (s += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double u01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * u01(); }
  std::uint64_t below(std::uint64_t n) { return n ? next() % n : 0; }
  Rng fork(std::uint64_t stream) { return Rng(next() ^ (stream * 0xd1342543de82ef95ULL)); }
};

}  // namespace schmidt
