#pragma once

// Geometry of the symmetric space X = { X Hermitian, X >> 0, det X = 1 } of SL(d, K)
// with the metric <X, Y>_p = 1/2 Tr(p^-1 X p^-1 Y).

#include <variant>

#include "anosov/types.hpp"

namespace anosov::symspace {

class GroupElement {
 public:
  // Validates |det - 1| <= tol_det and rescales to det exactly 1.
  static GroupElement from_matrix(const Matrix& m, double tol_det = 1e-9);
  static GroupElement identity(int dim);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const { return m_; }
  // Inverse is carried along products, so words stay accurate where LU would not.
  const Matrix& inverse_matrix() const { return inv_; }
  GroupElement inverse() const { return GroupElement(inv_, m_); }

  friend GroupElement operator*(const GroupElement& a, const GroupElement& b);

 private:
  GroupElement(Matrix m, Matrix inv) : m_(std::move(m)), inv_(std::move(inv)) {}
  Matrix m_;
  Matrix inv_;
};

// Element of the closed positive Weyl chamber: non-increasing, trace zero.
class CartanVector {
 public:
  explicit CartanVector(RealVector a, double tol = 1e-9);

  int size() const { return static_cast<int>(a_.size()); }
  double operator[](int i) const { return a_[i]; }
  const RealVector& entries() const { return a_; }

  // a_1 - a_2, the first simple root.
  double root_gap() const { return a_[0] - a_[1]; }
  // a_{d-1} - a_d, the root relevant for the dual type.
  double iota_root_gap() const { return a_[size() - 2] - a_[size() - 1]; }
  // Length under the inner product 2 Tr(AB).
  double norm() const;

  // The reversed segment: -reverse(a).
  CartanVector flipped() const;

 private:
  RealVector a_;
};

// Unit vectors Z and iota Z spanning the rays of the types zeta and iota zeta.
CartanVector model_zeta(int dim);
CartanVector model_iota_zeta(int dim);
// zeta_0 = d_alpha(Z) = sqrt(d / (2(d-1))).
double zeta0(int dim);

class Point {
 public:
  static Point from_matrix(const Matrix& m, const Tolerances& tol = {});
  static Point basepoint(int dim);
  // p = f f^dagger for f with |det f| = 1. Goes through the SVD of f, which keeps
  // the small eigenvalues far more accurate than forming f f^dagger.
  static Point from_factor(const Matrix& f);

  int dim() const { return static_cast<int>(u_.rows()); }
  const Matrix& matrix() const { return p_; }
  const Matrix& sqrt() const { return sqrt_; }
  const Matrix& inv_sqrt() const { return inv_sqrt_; }
  Matrix inverse() const;
  // Descending eigenvalues as logs, with columns of eigenvectors() matching.
  const RealVector& log_eigenvalues() const { return log_lambda_; }
  const Matrix& eigenvectors() const { return u_; }

 private:
  Point(Matrix u, RealVector log_lambda);
  Matrix u_;
  RealVector log_lambda_;
  Matrix p_;
  Matrix sqrt_;
  Matrix inv_sqrt_;
};

// A point of KP^{d-1}: unit vector, phase fixed so the largest entry is real positive.
struct LineFlag {
  Vector v;
  static LineFlag from_vector(const Vector& v);
};

// A point of the dual projective space: the hyperplane ker(u) for a unit row covector u.
struct HyperplaneFlag {
  RowVector u;
  static HyperplaneFlag from_covector(const RowVector& u);
  // The normal vector u^dagger with respect to the standard inner product.
  Vector normal() const { return u.adjoint(); }
};

using Flag = std::variant<LineFlag, HyperplaneFlag>;

enum class FlagType { zeta, iota_zeta };

Point act(const GroupElement& g, const Point& p);
LineFlag act(const GroupElement& g, const LineFlag& f);
HyperplaneFlag act(const GroupElement& g, const HyperplaneFlag& f);

// SVD of p^{-1/2} q^{1/2} = left * diag(exp(a)) * right^dagger, where a is the
// vector-valued distance d(p, q). Both flag families of the segment and of its
// reverse can be read off this one decomposition.
struct SegmentSpectrum {
  CartanVector a;
  Matrix left;
  Matrix right;
};

SegmentSpectrum analyze_segment(const Point& p, const Point& q);

CartanVector vec_distance(const Point& p, const Point& q);
double riem_distance(const Point& p, const Point& q);
double d_alpha(const Point& p, const Point& q);
Point midpoint(const Point& p, const Point& q);

LineFlag zeta_flag(const Point& p, const Point& q, const Tolerances& tol = {});
HyperplaneFlag iota_zeta_flag(const Point& p, const Point& q, const Tolerances& tol = {});
// Flags from an already analyzed segment pq: zeta(pq) and iota zeta(qp).
LineFlag zeta_flag(const Point& p, const SegmentSpectrum& pq, const Tolerances& tol = {});
HyperplaneFlag reverse_iota_zeta_flag(const Point& q, const SegmentSpectrum& pq,
                                      const Tolerances& tol = {});

// Cosine of the Riemannian angle at p between the ideal points of the two flags.
double cos_angle(const Point& p, const Flag& f1, const Flag& f2);
// Same angle in radians, evaluated without going through acos near 0 and pi.
double angle(const Point& p, const Flag& f1, const Flag& f2);

double segment_zeta_angle(const Point& x, const Point& a, const Point& b, FlagType type_a,
                          FlagType type_b, const Tolerances& tol = {});

bool is_transverse(const Point& p, const HyperplaneFlag& hyp, const LineFlag& line,
                   const Tolerances& tol = {});
// Distance from q to the parallel set P(hyp, line).
double dist_to_parallel_set(const Point& q, const HyperplaneFlag& hyp, const LineFlag& line,
                            const Tolerances& tol = {});

// min{D, (e^D - 1) e^{-S}}.
double ray_to_parallel_bound(double dist, double spacing);
// zeta_0(d) * D / sinh(S - D); requires S > D >= 0.
double zeta_angle_bound(double spacing, double dist, int dim);

// -1/2 log( (e_1^dagger y^-1 e_1) (e^2 y e^2^dagger) ), Busemann difference b(I) - b(y)
// for the standard line/hyperplane flag.
double busemann_gap_standard(const Point& y);

}  // namespace anosov::symspace
