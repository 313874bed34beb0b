#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "qm/rational.hpp"
#include "qm/zupoly.hpp"

namespace qm {

template <class C>
struct coeff_traits;

template <>
struct coeff_traits<Rational> {
  static bool is_zero(const Rational& c) { return qm::is_zero(c); }
  // (q d/dq) on the coefficient of q^n
  static Rational qderive(const Rational& c, Idx n) { return c * long(n); }
  static bool is_unit(const Rational& c) { return !qm::is_zero(c); }
  static Rational div_unit(const Rational& c, const Rational& u) { return c / u; }
  static Rational unit_value(const Rational& c) { return c; }
};

template <>
struct coeff_traits<ZUPoly> {
  static bool is_zero(const ZUPoly& c) { return c.is_zero(); }
  // z^a u^b q^n differentiates (as (2 pi i)^-1 d/dz) to (n z^a + a u z^{a-1}) u^b q^n
  static ZUPoly qderive(const ZUPoly& c, Idx n) {
    ZUPoly r = c * Rational(long(n));
    for (const auto& [k, v] : c.terms())
      if (k.first > 0)
        r += ZUPoly::monomial(k.first - 1, k.second + 1, v * long(k.first));
    return r;
  }
  // series division only by a unit (nonzero rational) leading coefficient
  static bool is_unit(const ZUPoly& c) { return c.is_rational() && !c.is_zero(); }
  static ZUPoly div_unit(const ZUPoly& c, const Rational& u) {
    return c * (Rational(1) / u);
  }
  static Rational unit_value(const ZUPoly& c) { return c.rational_value(); }
};

namespace series_detail {

// Cauchy-product kernels.  Both compute out[k] = sum_{i+j=k} a[i] b[j] with i
// ascending, so the parallel kernel is bit-identical to the serial reference
// (each output coefficient is accumulated by a single thread in the same
// order).  The serial version is kept as the reference implementation for
// tests and the benchmark.
template <class C>
std::vector<C> mul_serial(const std::vector<C>& a, const std::vector<C>& b,
                          Idx out_len) {
  std::vector<C> out(static_cast<std::size_t>(out_len));
  for (Idx k = 0; k < out_len; ++k) {
    C acc{};
    const Idx ilo = std::max<Idx>(0, k - Idx(b.size()) + 1);
    const Idx ihi = std::min<Idx>(k, Idx(a.size()) - 1);
    for (Idx i = ilo; i <= ihi; ++i) acc += a[i] * b[k - i];
    out[k] = std::move(acc);
  }
  return out;
}

template <class C>
std::vector<C> mul_parallel(const std::vector<C>& a, const std::vector<C>& b,
                            Idx out_len) {
  std::vector<C> out(static_cast<std::size_t>(out_len));
#pragma omp parallel for schedule(dynamic, 16)
  for (Idx k = 0; k < out_len; ++k) {
    C acc{};
    const Idx ilo = std::max<Idx>(0, k - Idx(b.size()) + 1);
    const Idx ihi = std::min<Idx>(k, Idx(a.size()) - 1);
    for (Idx i = ilo; i <= ihi; ++i) acc += a[i] * b[k - i];
    out[k] = std::move(acc);
  }
  return out;
}

// Below this many coefficient products the fork/join overhead dominates.
inline constexpr Idx kParallelCutoff = 1 << 14;

template <class C>
std::vector<C> mul_dispatch(const std::vector<C>& a, const std::vector<C>& b,
                            Idx out_len) {
  const Idx work = Idx(a.size()) * Idx(b.size());
  if (work >= kParallelCutoff) return mul_parallel(a, b, out_len);
  return mul_serial(a, b, out_len);
}

}  // namespace series_detail

// Truncated formal power series in q.  Stored as (valuation, coefficients,
// truncation): coefficients[i] is the coefficient of q^(valuation+i), and all
// coefficients are correct for exponents < truncation.  The leading stored
// coefficient is nonzero unless the series is identically zero up to its
// truncation, which is represented by valuation == truncation and no stored
// coefficients.  Values are immutable after construction; every operation
// below is a pure function, so series can be shared across threads freely.
//
// Truncation is propagated pessimistically: operations never read past an
// operand's truncation, they shrink the result's instead.
template <class C>
class Series {
 public:
  using Coeff = C;
  using Traits = coeff_traits<C>;

  static Series zero(Idx truncation) {
    if (truncation < 0) throw error("series truncation must be >= 0");
    Series s;
    s.val_ = truncation;
    s.trunc_ = truncation;
    return s;
  }

  // q^e * c, known up to the given truncation.
  static Series monomial(Idx e, const C& c, Idx truncation) {
    if (e < 0) throw error("series valuation must be >= 0");
    if (Traits::is_zero(c) || e >= truncation) return zero(truncation);
    Series s;
    s.val_ = e;
    s.coeffs_.push_back(c);
    s.trunc_ = truncation;
    return s;
  }

  static Series constant(const C& c, Idx truncation) {
    return monomial(0, c, truncation);
  }

  Series(Idx valuation, std::vector<C> coeffs, Idx truncation)
      : val_(valuation), coeffs_(std::move(coeffs)), trunc_(truncation) {
    if (valuation < 0) throw error("series valuation must be >= 0");
    if (truncation < valuation)
      throw error("series truncation below valuation");
    if (Idx(coeffs_.size()) > truncation - valuation)
      coeffs_.resize(static_cast<std::size_t>(truncation - valuation));
    normalize();
  }

  Idx valuation() const { return val_; }
  Idx truncation() const { return trunc_; }
  bool is_zero() const { return coeffs_.empty(); }
  const std::vector<C>& data() const { return coeffs_; }

  // Coefficient of q^e; reading at or past the truncation is an error.
  C coeff(Idx e) const {
    if (e >= trunc_) throw error("coefficient read past series truncation");
    if (e < val_ || e >= val_ + Idx(coeffs_.size())) return C{};
    return coeffs_[static_cast<std::size_t>(e - val_)];
  }

  const C& leading() const {
    if (is_zero()) throw error("leading coefficient of zero series");
    return coeffs_.front();
  }

  Series truncated(Idx t) const {
    if (t > trunc_) throw error("cannot extend series truncation");
    std::vector<C> c = coeffs_;
    return Series(std::min(val_, t), std::move(c), t);
  }

  friend Series operator+(const Series& a, const Series& b) {
    const Idx t = std::min(a.trunc_, b.trunc_);
    const Idx v = std::min(std::min(a.val_, b.val_), t);
    std::vector<C> out(static_cast<std::size_t>(t - v));
    for (Idx i = 0; i < Idx(a.coeffs_.size()) && a.val_ + i < t; ++i)
      out[static_cast<std::size_t>(a.val_ + i - v)] += a.coeffs_[i];
    for (Idx i = 0; i < Idx(b.coeffs_.size()) && b.val_ + i < t; ++i)
      out[static_cast<std::size_t>(b.val_ + i - v)] += b.coeffs_[i];
    return Series(v, std::move(out), t);
  }

  friend Series operator-(const Series& a) {
    std::vector<C> out;
    out.reserve(a.coeffs_.size());
    for (const C& c : a.coeffs_) out.push_back(C{} - c);
    return Series(a.val_, std::move(out), a.trunc_);
  }

  friend Series operator-(const Series& a, const Series& b) { return a + (-b); }

  // Exact Cauchy product.  The coefficient domains are integral, so the
  // result valuation is exactly the sum of the operand valuations; the
  // result is correct for exponents < min(ta + vb, tb + va).
  friend Series operator*(const Series& a, const Series& b) {
    const Idx t = std::min(a.trunc_ + b.val_, b.trunc_ + a.val_);
    if (a.is_zero() || b.is_zero()) return zero(t);
    const Idx v = a.val_ + b.val_;
    const Idx out_len = std::min<Idx>(
        t - v, Idx(a.coeffs_.size()) + Idx(b.coeffs_.size()) - 1);
    if (out_len <= 0) return zero(t);
    auto out = series_detail::mul_dispatch(a.coeffs_, b.coeffs_, out_len);
    return Series(v, std::move(out), t);
  }

  template <class S>
  Series scaled(const S& c) const {
    std::vector<C> out;
    out.reserve(coeffs_.size());
    for (const C& x : coeffs_) out.push_back(x * c);
    return Series(val_, std::move(out), trunc_);
  }

  bool operator==(const Series& o) const {
    return val_ == o.val_ && trunc_ == o.trunc_ && coeffs_ == o.coeffs_;
  }
  bool operator!=(const Series& o) const { return !(*this == o); }

 private:
  Series() = default;

  void normalize() {
    std::size_t lead = 0;
    while (lead < coeffs_.size() && Traits::is_zero(coeffs_[lead])) ++lead;
    if (lead == coeffs_.size()) {
      coeffs_.clear();
      val_ = trunc_;
      return;
    }
    if (lead > 0) {
      coeffs_.erase(coeffs_.begin(), coeffs_.begin() + long(lead));
      val_ += Idx(lead);
    }
    while (!coeffs_.empty() && Traits::is_zero(coeffs_.back()))
      coeffs_.pop_back();
  }

  Idx val_ = 0;
  std::vector<C> coeffs_;
  Idx trunc_ = 0;
};

using QSeries = Series<Rational>;
using ZUSeries = Series<ZUPoly>;

// True when the two series agree coefficientwise up to the smaller
// truncation.  Structural operator== additionally requires equal truncations.
template <class C>
bool agree(const Series<C>& a, const Series<C>& b) {
  const Idx t = std::min(a.truncation(), b.truncation());
  for (Idx e = std::min(a.valuation(), b.valuation()); e < t; ++e)
    if (!(a.coeff(e) == b.coeff(e))) return false;
  return true;
}

// f' = (2 pi i)^-1 df/dz = q df/dq, extended to ZU coefficients by the
// product rule on z^a e^(2 pi i n z).  Truncation is unchanged.
template <class C>
Series<C> qderive(const Series<C>& f) {
  std::vector<C> out;
  out.reserve(f.data().size());
  for (Idx i = 0; i < Idx(f.data().size()); ++i)
    out.push_back(coeff_traits<C>::qderive(f.data()[i], f.valuation() + i));
  return Series<C>(f.valuation(), std::move(out), f.truncation());
}

// Exact series quotient.  Requires the divisor's leading coefficient to be a
// unit (for ZU series: a nonzero rational).  A dividend valuation below the
// divisor's would force a negative result valuation and is an error; the
// callers that divide by Delta powers rely on this to surface transcription
// mistakes instead of producing garbage.
template <class C>
Series<C> operator/(const Series<C>& a, const Series<C>& b) {
  using Traits = coeff_traits<C>;
  if (b.is_zero()) throw error("series division by zero series");
  if (!Traits::is_unit(b.leading()))
    throw error("series division by non-unit leading coefficient");
  const Idx m = std::min(a.truncation() - a.valuation(),
                         b.truncation() - b.valuation());
  if (a.is_zero()) {
    const Idx t = a.truncation() - b.valuation();
    if (t < 0) throw error("insufficient truncation in series division");
    return Series<C>::zero(t);
  }
  if (a.valuation() < b.valuation())
    throw error("series division would have negative valuation");
  if (m <= 0) throw error("insufficient truncation in series division");
  const Rational unit = Traits::unit_value(b.leading());
  const Idx v = a.valuation() - b.valuation();
  std::vector<C> q(static_cast<std::size_t>(m));
  std::vector<C> rem(a.data().begin(),
                     a.data().begin() + std::min<std::size_t>(a.data().size(),
                                                              std::size_t(m)));
  rem.resize(static_cast<std::size_t>(m));
  for (Idx k = 0; k < m; ++k) {
    if (Traits::is_zero(rem[k])) continue;
    C c = Traits::div_unit(rem[k], unit);
    for (Idx j = 1; j < m - k && j < Idx(b.data().size()); ++j)
      rem[k + j] -= c * b.data()[j];
    q[static_cast<std::size_t>(k)] = std::move(c);
  }
  return Series<C>(v, std::move(q), v + m);
}

template <class C>
Series<C> pow(const Series<C>& base, Idx k) {
  if (k < 0) throw error("negative series power");
  if (k == 0) return Series<C>::constant(C{Rational(1)}, base.truncation());
  Series<C> r = base;
  for (Idx i = 1; i < k; ++i) r = r * base;
  return r;
}

inline ZUSeries promote(const QSeries& f) {
  std::vector<ZUPoly> out;
  out.reserve(f.data().size());
  for (const Rational& c : f.data()) out.emplace_back(c);
  return ZUSeries(f.valuation(), std::move(out), f.truncation());
}

// Extracts the coefficient series of the monomial z^a u^b.
inline QSeries zu_slice(const ZUSeries& f, int zdeg, int udeg) {
  std::vector<Rational> out;
  out.reserve(f.data().size());
  for (const ZUPoly& c : f.data()) out.push_back(c.coeff(zdeg, udeg));
  return QSeries(f.valuation(), std::move(out), f.truncation());
}

inline int z_degree(const ZUSeries& f) {
  int d = -1;
  for (const ZUPoly& c : f.data()) d = std::max(d, c.z_degree());
  return d;
}

inline int u_degree(const ZUSeries& f) {
  int d = -1;
  for (const ZUPoly& c : f.data()) d = std::max(d, c.u_degree());
  return d;
}

// Substitutes z -> z + 1 coefficientwise (the q-part is T-invariant).
inline ZUSeries shift_z(const ZUSeries& f) {
  std::vector<ZUPoly> out;
  out.reserve(f.data().size());
  for (const ZUPoly& c : f.data()) out.push_back(c.shift_z());
  return ZUSeries(f.valuation(), std::move(out), f.truncation());
}

}  // namespace qm
