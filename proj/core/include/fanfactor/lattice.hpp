#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fanfactor/numeric.hpp"

namespace fanfactor {

using Vec = std::vector<Int>;    // lattice vector
using QVec = std::vector<Rat>;   // rational vector
using Mat = std::vector<Vec>;    // rows are lattice vectors
using QMat = std::vector<QVec>;

Vec add(const Vec& a, const Vec& b);
Vec sub(const Vec& a, const Vec& b);
Vec neg(const Vec& a);
Vec scale(const Int& c, const Vec& a);
Int dot(const Vec& a, const Vec& b);
bool is_zero(const Vec& a);
Vec zero_vec(std::size_t n);

QVec to_q(const Vec& a);
QVec qadd(const QVec& a, const QVec& b);
QVec qsub(const QVec& a, const QVec& b);
QVec qscale(const Rat& c, const QVec& a);
Rat qdot(const QVec& a, const QVec& b);
bool qis_zero(const QVec& a);
bool qis_integral(const QVec& a);
Vec qnumerators(const QVec& a);  // only when qis_integral

// Clears denominators and divides by content; the primitive lattice vector on
// the same ray. Zero input is an error.
Vec primitive(const Vec& a);
Vec primitive_of_q(const QVec& a);
Int content(const Vec& a);

// lexicographic order on vectors, used for all canonical sorting
int vec_cmp(const Vec& a, const Vec& b);
bool vec_less(const Vec& a, const Vec& b);

std::string vec_str(const Vec& a);
std::string qvec_str(const QVec& a);

// Fraction-free Bareiss elimination; exact for square integer matrices.
Int det(Mat a);

int rank_of(const Mat& rows);
int qrank_of(QMat rows);

// Index of the subgroup generated by the rows inside the lattice of integer
// points of their rational span: gcd of all maximal minors. Errors when the
// rows are dependent.
Int lattice_index(const Mat& rows);

// Solutions of  sum_i c_i * rows_i = target  in rational coefficients c.
struct CombinationSolutions {
  bool consistent = false;
  QVec particular;            // one solution, free coordinates set to zero
  std::vector<QVec> kernel;   // basis of homogeneous solutions
};
CombinationSolutions solve_combination(const Mat& rows, const QVec& target);

// Unique-up-to-scale rational relation among the rows (their kernel must be
// one-dimensional, as for circuit generator sets). Errors otherwise.
QVec kernel_vector(const Mat& rows);

// Basis of { u : rows . u = 0 }. Width must be passed so an empty row list
// still knows its ambient dimension.
QMat nullspace(const Mat& rows, int ambient);

// Lattice points in the open parallelepiped { sum a_i v_i : 0 < a_i < 1 } of
// an independent family, found by scanning the integral bounding box and
// solving for the coefficients exactly. Sorted lexicographically.
std::vector<Vec> parallelepiped_points(const Mat& rows);

}  // namespace fanfactor
