#pragma once

#include <vector>

#include "qm/rational.hpp"

namespace qm {

// Exact dense linear algebra over the rationals.  Deterministic throughout:
// elimination pivots on the first nonzero entry in column order, which is
// what makes kernel vectors and hence golden outputs reproducible.
using RatVec = std::vector<Rational>;
using RatMat = std::vector<RatVec>;

// In-place reduced row echelon form; returns the pivot column of each
// produced row, in order.
std::vector<int> rref(RatMat& m);

// Canonical nullspace basis of the matrix (columns = unknowns): one vector
// per free column, with a 1 in that column, in ascending free-column order.
std::vector<RatVec> nullspace(const RatMat& m);

// Solves m x = rhs exactly.  Requires a consistent system that determines x
// uniquely; throws otherwise.
RatVec solve_unique(const RatMat& m, const RatVec& rhs);

Idx rank(const RatMat& m);

}  // namespace qm
