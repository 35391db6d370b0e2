#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <stdexcept>
#include <string>

namespace flatland {

using Int = boost::multiprecision::cpp_int;
// Always stored reduced with positive denominator.
using Rat = boost::multiprecision::cpp_rational;

inline Int rat_num(const Rat& r) { return numerator(r); }
inline Int rat_den(const Rat& r) { return denominator(r); }

/// Formats as "p/q" (q > 0), or "p" when q == 1.
inline std::string rat_str(const Rat& r) {
  if (rat_den(r) == 1) return rat_num(r).str();
  return rat_num(r).str() + "/" + rat_den(r).str();
}

/// Parses "p/q" or "p". Throws std::invalid_argument on malformed input or
/// zero denominator.
inline Rat rat_parse(const std::string& s) {
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rat(Int(s));
    Int p(s.substr(0, slash));
    Int q(s.substr(slash + 1));
    if (q == 0) throw std::invalid_argument("zero denominator in rational: " + s);
    return Rat(p, q);
  } catch (const std::runtime_error&) {
    throw std::invalid_argument("malformed rational: " + s);
  }
}

inline Rat rat_abs(const Rat& r) { return r < 0 ? Rat(-r) : r; }

inline Rat rat_min(const Rat& a, const Rat& b) { return a < b ? a : b; }
inline Rat rat_max(const Rat& a, const Rat& b) { return a < b ? b : a; }

/// A rational upper bound for sqrt(x), x >= 0.
inline Rat sqrt_upper(const Rat& x) {
  if (x < 0) throw std::invalid_argument("sqrt_upper of negative");
  Int p = rat_num(x), q = rat_den(x);
  // sqrt(p/q) = sqrt(p*q)/q <= (isqrt(p*q)+1)/q
  Int pq = p * q;
  return Rat(sqrt(pq) + 1, q);
}

/// A rational lower bound for sqrt(x), x >= 0.
inline Rat sqrt_lower(const Rat& x) {
  if (x < 0) throw std::invalid_argument("sqrt_lower of negative");
  Int p = rat_num(x), q = rat_den(x);
  Int pq = p * q;
  return Rat(sqrt(pq), q);
}

/// Decides sqrt(a) + d <= sqrt(b) exactly, for a, b >= 0 and d rational.
inline bool sqrt_plus_leq_sqrt(const Rat& a, const Rat& d, const Rat& b) {
  if (d <= 0) {
    // sqrt(a) <= sqrt(b) - |d|  <=>  sqrt(a) + |d| ... handle directly:
    // sqrt(a) + d <= sqrt(b) with d <= 0: sqrt(a) <= sqrt(b) + |d|.
    Rat e = -d;
    // sqrt(a) <= sqrt(b) + e  <=>  a <= b + e^2 + 2 e sqrt(b)
    Rat c = a - b - e * e;
    if (c <= 0) return true;
    // c <= 2 e sqrt(b)  <=>  c^2 <= 4 e^2 b
    return c * c <= 4 * e * e * b;
  }
  // sqrt(a) + d <= sqrt(b), d > 0: requires b >= d^2 at least.
  Rat c = b - a - d * d;
  if (c < 0) return false;
  // 2 d sqrt(a) <= c  <=>  4 d^2 a <= c^2
  return 4 * d * d * a <= c * c;
}

/// Decides |sqrt(a) - sqrt(b)| <= sqrt(d) exactly, for a, b, d >= 0.
inline bool sqrt_diff_leq_sqrt(const Rat& a, const Rat& b, const Rat& d) {
  // (sqrt(a)-sqrt(b))^2 <= d  <=>  a + b - d <= 2 sqrt(ab)
  Rat c = a + b - d;
  if (c <= 0) return true;
  return c * c <= 4 * a * b;
}

/// True iff x is the square of a rational; if so, *root receives sqrt(x) >= 0.
inline bool rat_sqrt_exact(const Rat& x, Rat* root) {
  if (x < 0) return false;
  Int p = rat_num(x), q = rat_den(x);
  Int sp = sqrt(p), sq = sqrt(q);
  if (sp * sp != p || sq * sq != q) return false;
  if (root) *root = Rat(sp, sq);
  return true;
}

}  // namespace flatland
