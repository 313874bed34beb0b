#pragma once

#include <array>
#include <set>
#include <string>

#include "qm/balanced.hpp"

namespace qm {

// Integer polynomial in w, descending-degree coefficients.
using WPoly = std::vector<Integer>;

Rational wpoly_eval(const WPoly& p, int w);

// The depth-4 weight-raising polynomials p0..p5 and the weight-lowering
// coefficient forms C40..C48 (exact combinations c * poly(w) * E4^a E6^b).
// Loaded from data/depth4_tables.json; the file carries an FNV-1a checksum
// over the canonical table serialization, and degrees/leading terms are
// checked on load so a corrupted table fails before it can poison results.
struct Depth4Tables {
  struct CTerm {
    Rational scale;
    WPoly poly;
    int e4 = 0;
    int e6 = 0;
  };
  std::array<WPoly, 6> p;
  std::array<std::vector<CTerm>, 5> c;  // C40, C42, C44, C46, C48
};
Depth4Tables load_depth4_tables(const std::string& path);
const Depth4Tables& depth4_tables();

// Smallest weight with a nonzero extremal form constructed here:
// 6, 4, 6, 12 for depths 1..4.
int extremal_min_weight(int depth);

// Initial ladder forms: the normalized extremal forms of weight 6, 4, 6, 12
// for depths 1..4 (valuations 1, 1, 2, 5).
QuasiForm extremal_base(int depth, Idx order);

// Weight-raising operators; input extremal of the given depth and weight in
// the depth's ladder residue class, output an unnormalized extremal form of
// weight w + (6, 4, 6, 12).  The valuation gain is checked and a miss is an
// error (it would mean a table transcription slip).
QuasiForm kup(int depth, int w, const QuasiForm& f);

// Weight-lowering operators (division by Delta, Delta, Delta^2, Delta^5);
// output a known scalar multiple of the normalized form of weight
// w - (6, 4, 6, 12).
QuasiForm kdown(int depth, int w, const QuasiForm& f);

// The normalized master equation satisfied by the depth's ladder forms:
// mde_from_exponents of the extremal tuple (dim QM_w^r - 1, 0, ..., 0).
MDEOperator master_equation(int depth, int w, Idx order);

// Unnormalized residue lift: maps the on-class extremal form of weight w to
// an extremal form of weight w + offset.  Exposed so the stated leading
// constants of the lift operators can be pinned by tests.
QuasiForm residue_lift_raw(int depth, int w, const QuasiForm& f, int offset);

// Normalized extremal form of weight w, correct for exponents < order.
// On-class weights come from the memoized K^up ladder; off-class weights
// from the residue lifts applied to the ladder entry below.
QuasiForm extremal_form(int w, int depth, Idx order);

enum class Provenance { init, kup_recursion, residue_lift };
Provenance extremal_provenance(int w, int depth);

// Union of prime factors of the coefficient denominators among the first
// `upto` coefficients (from the valuation on).
std::set<Integer> denominator_primes(const QuasiForm& f, Idx upto);

struct KKEntry {
  int weight = 0;
  std::vector<Integer> primes;
  bool pass = false;
};

// Checks the Kaneko-Koike denominator property: for every admissible even
// weight w <= max_weight, the denominators of the first `upto` coefficients
// of the normalized extremal form contain only primes < w.  Failures are
// report content, not exceptions.
std::vector<KKEntry> check_kaneko_koike(int depth, int max_weight, Idx upto);

}  // namespace qm
