#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace qm {

using Idx = std::int64_t;

// All domain errors (bad arguments, insufficient truncation, failed
// divisions, schema violations) are reported through this type.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Exact rationals, always gcd-reduced with positive denominator.
// mpq_class keeps results canonical as long as inputs are; every
// construction path below canonicalizes.
using Rational = mpq_class;
using Integer = mpz_class;

inline Rational rat(long n, long d = 1) {
  if (d == 0) throw error("rational with zero denominator");
  Rational q(n, d);
  q.canonicalize();
  return q;
}

inline Rational rat(const Integer& n, const Integer& d) {
  if (sgn(d) == 0) throw error("rational with zero denominator");
  Rational q(n, d);
  q.canonicalize();
  return q;
}

inline bool is_zero(const Rational& x) { return sgn(x) == 0; }

// Renders "p" when the denominator is 1, otherwise "p/q".
inline std::string rat_str(const Rational& x) {
  return x.get_str();
}

// Accepts "p" or "p/q" with q > 0 implied by canonicalization.
inline Rational rat_parse(const std::string& s) {
  if (s.empty()) throw error("empty rational literal");
  std::size_t slash = s.find('/');
  auto digits = [](const std::string& t) {
    if (t.empty()) return false;
    std::size_t i = (t[0] == '-') ? 1 : 0;
    if (i == t.size()) return false;
    for (; i < t.size(); ++i)
      if (t[i] < '0' || t[i] > '9') return false;
    return true;
  };
  std::string num = (slash == std::string::npos) ? s : s.substr(0, slash);
  std::string den = (slash == std::string::npos) ? "1" : s.substr(slash + 1);
  if (!digits(num) || !digits(den) || den[0] == '-')
    throw error("malformed rational literal: " + s);
  Rational q;
  if (q.set_str(num + "/" + den, 10) != 0)
    throw error("malformed rational literal: " + s);
  if (sgn(q.get_den()) == 0) throw error("rational with zero denominator: " + s);
  q.canonicalize();
  return q;
}

}  // namespace qm
