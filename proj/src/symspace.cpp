#include "anosov/symspace.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace anosov {

std::string to_string(Field f) { return f == Field::real ? "real" : "complex"; }

Field field_from_string(const std::string& s) {
  if (s == "real") return Field::real;
  if (s == "complex") return Field::complex;
  throw Error(ErrorCode::config, "unknown field '" + s + "'");
}

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_input: return "InvalidInput";
    case ErrorCode::eigen_failure: return "EigenFailure";
    case ErrorCode::not_regular: return "NotRegular";
    case ErrorCode::not_transverse: return "NotTransverse";
    case ErrorCode::invalid_range: return "InvalidRange";
    case ErrorCode::invalid_aux: return "InvalidAux";
    case ErrorCode::eps_too_large: return "EpsTooLarge";
    case ErrorCode::tolerance_collision: return "ToleranceCollision";
    case ErrorCode::unknown_letter: return "UnknownLetter";
    case ErrorCode::wrong_length: return "WrongLength";
    case ErrorCode::empty_survey: return "EmptySurvey";
    case ErrorCode::regularity_obstruction: return "RegularityObstruction";
    case ErrorCode::config: return "ConfigError";
    case ErrorCode::io: return "IoError";
  }
  return "Error";
}

namespace symspace {

namespace {

using SVD = Eigen::JacobiSVD<Matrix>;

void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() < 2) {
    std::ostringstream os;
    os << what << " must be a square matrix of size >= 2, got " << m.rows() << "x" << m.cols();
    throw Error(ErrorCode::invalid_input, os.str());
  }
}

void require_same_dim(int a, int b) {
  if (a != b) throw Error(ErrorCode::invalid_input, "dimension mismatch");
}

// Multiply by a unit scalar so the first entry of maximal modulus is real positive.
template <class V>
V fix_phase(V v) {
  const double top = v.cwiseAbs().maxCoeff();
  Eigen::Index pick = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) >= top * (1.0 - 1e-12)) {
      pick = i;
      break;
    }
  }
  const Scalar phase = std::conj(v[pick]) / std::abs(v[pick]);
  v *= phase;
  v[pick] = Scalar(v[pick].real(), 0.0);
  return v;
}

// |<x, w>| and the sine of the Hermitian angle between unit vectors x, w, with the
// sine computed from the orthogonal component rather than 1 - c^2.
struct Pairing {
  double overlap;
  double sine;
};

Pairing pair_unit(const Vector& x, const Vector& w) {
  const Scalar inner = x.dot(w);
  const double sine = std::min(1.0, (w - inner * x).norm());
  return {std::min(1.0, std::abs(inner)), sine};
}

// Translate both flags from p to the basepoint by p^{-1/2}.
Vector translated(const Point& p, const LineFlag& f) { return (p.inv_sqrt() * f.v).normalized(); }
Vector translated(const Point& p, const HyperplaneFlag& f) {
  return RowVector(f.u * p.sqrt()).adjoint().normalized();
}

struct FlagGeometry {
  Pairing pairing;
  bool mixed;  // one line and one hyperplane
};

FlagGeometry flag_geometry(const Point& p, const Flag& f1, const Flag& f2) {
  const bool line1 = std::holds_alternative<LineFlag>(f1);
  const bool line2 = std::holds_alternative<LineFlag>(f2);
  auto tr = [&p](const Flag& f) {
    return std::visit([&p](const auto& g) { return translated(p, g); }, f);
  };
  return {pair_unit(tr(f1), tr(f2)), line1 != line2};
}

double cartan_from_svd(const RealVector& sigma, RealVector& a) {
  const Eigen::Index d = sigma.size();
  a.resize(d);
  double head = 0.0;
  for (Eigen::Index i = 0; i + 1 < d; ++i) {
    if (!(sigma[i] > 0.0) || !std::isfinite(sigma[i])) {
      throw Error(ErrorCode::eigen_failure, "degenerate singular value in segment analysis");
    }
    a[i] = std::log(sigma[i]);
    head += a[i];
  }
  // The smallest singular value carries the largest relative error; use det = 1.
  a[d - 1] = -head;
  return head;
}

}  // namespace

// ---------------------------------------------------------------- GroupElement

GroupElement GroupElement::from_matrix(const Matrix& m, double tol_det) {
  require_square(m, "group element");
  const Scalar det = m.determinant();
  if (!(std::abs(det - Scalar(1.0)) <= tol_det)) {
    std::ostringstream os;
    os << "group element has det " << det << ", expected 1 within " << tol_det;
    throw Error(ErrorCode::invalid_input, os.str());
  }
  const Matrix normalized = m / std::pow(det, 1.0 / static_cast<double>(m.rows()));
  return GroupElement(normalized, normalized.fullPivLu().inverse());
}

GroupElement GroupElement::identity(int dim) {
  Matrix id = Matrix::Identity(dim, dim);
  return GroupElement(id, id);
}

GroupElement operator*(const GroupElement& a, const GroupElement& b) {
  require_same_dim(a.dim(), b.dim());
  return GroupElement(a.m_ * b.m_, b.inv_ * a.inv_);
}

// ---------------------------------------------------------------- CartanVector

CartanVector::CartanVector(RealVector a, double tol) : a_(std::move(a)) {
  if (a_.size() < 2) throw Error(ErrorCode::invalid_input, "Cartan vector needs d >= 2");
  const double scale = std::max(1.0, a_.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i + 1 < a_.size(); ++i) {
    if (a_[i] < a_[i + 1] - tol * scale) {
      throw Error(ErrorCode::invalid_input, "Cartan vector entries must be non-increasing");
    }
  }
  if (std::abs(a_.sum()) > tol * scale * static_cast<double>(a_.size())) {
    throw Error(ErrorCode::invalid_input, "Cartan vector must have trace zero");
  }
}

double CartanVector::norm() const { return std::sqrt(2.0 * a_.squaredNorm()); }

CartanVector CartanVector::flipped() const { return CartanVector(-a_.reverse().eval()); }

CartanVector model_zeta(int dim) {
  RealVector z = RealVector::Constant(dim, -1.0);
  z[0] = dim - 1.0;
  return CartanVector(z / std::sqrt(2.0 * dim * (dim - 1.0)));
}

CartanVector model_iota_zeta(int dim) {
  RealVector z = RealVector::Constant(dim, 1.0);
  z[dim - 1] = 1.0 - dim;
  return CartanVector(z / std::sqrt(2.0 * dim * (dim - 1.0)));
}

double zeta0(int dim) { return std::sqrt(dim / (2.0 * (dim - 1.0))); }

// ---------------------------------------------------------------- Point

Point::Point(Matrix u, RealVector log_lambda) : u_(std::move(u)), log_lambda_(std::move(log_lambda)) {
  const RealVector root = (0.5 * log_lambda_.array()).exp();
  p_ = u_ * log_lambda_.array().exp().matrix().asDiagonal() * u_.adjoint();
  sqrt_ = u_ * root.asDiagonal() * u_.adjoint();
  inv_sqrt_ = u_ * root.cwiseInverse().asDiagonal() * u_.adjoint();
}

Point Point::from_matrix(const Matrix& m, const Tolerances& tol) {
  require_square(m, "point");
  const double asym = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (asym > tol.sym) {
    throw Error(ErrorCode::invalid_input, "point matrix is not Hermitian");
  }
  const Matrix herm = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(herm);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::eigen_failure, "Hermitian eigensolver did not converge");
  }
  const RealVector& ev = es.eigenvalues();  // ascending
  if (!(ev[0] > 0.0)) throw Error(ErrorCode::invalid_input, "point matrix is not positive definite");
  const double log_det = ev.array().log().sum();
  if (std::abs(std::exp(log_det) - 1.0) > tol.det) {
    std::ostringstream os;
    os << "point has det " << std::exp(log_det) << ", expected 1 within " << tol.det;
    throw Error(ErrorCode::invalid_input, os.str());
  }
  const Eigen::Index d = ev.size();
  RealVector logs(d);
  Matrix u(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    logs[i] = std::log(ev[d - 1 - i]) - log_det / static_cast<double>(d);
    u.col(i) = es.eigenvectors().col(d - 1 - i);
  }
  return Point(std::move(u), std::move(logs));
}

Point Point::basepoint(int dim) {
  return Point(Matrix::Identity(dim, dim), RealVector::Zero(dim));
}

Point Point::from_factor(const Matrix& f) {
  require_square(f, "point factor");
  SVD svd(f, Eigen::ComputeFullU);
  RealVector a;
  cartan_from_svd(svd.singularValues(), a);
  return Point(svd.matrixU(), 2.0 * a);
}

Matrix Point::inverse() const {
  return u_ * (-log_lambda_).array().exp().matrix().asDiagonal() * u_.adjoint();
}

// ---------------------------------------------------------------- flags

LineFlag LineFlag::from_vector(const Vector& v) {
  const double n = v.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw Error(ErrorCode::invalid_input, "zero line vector");
  return LineFlag{fix_phase<Vector>(v / n)};
}

HyperplaneFlag HyperplaneFlag::from_covector(const RowVector& u) {
  const double n = u.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw Error(ErrorCode::invalid_input, "zero covector");
  return HyperplaneFlag{fix_phase<RowVector>(u / n)};
}

// ---------------------------------------------------------------- actions

Point act(const GroupElement& g, const Point& p) {
  require_same_dim(g.dim(), p.dim());
  return Point::from_factor(g.matrix() * p.sqrt());
}

LineFlag act(const GroupElement& g, const LineFlag& f) {
  return LineFlag::from_vector(g.matrix() * f.v);
}

HyperplaneFlag act(const GroupElement& g, const HyperplaneFlag& f) {
  return HyperplaneFlag::from_covector(f.u * g.inverse_matrix());
}

// ---------------------------------------------------------------- distances

SegmentSpectrum analyze_segment(const Point& p, const Point& q) {
  require_same_dim(p.dim(), q.dim());
  SVD svd(p.inv_sqrt() * q.sqrt(), Eigen::ComputeFullU | Eigen::ComputeFullV);
  RealVector a;
  cartan_from_svd(svd.singularValues(), a);
  return SegmentSpectrum{CartanVector(std::move(a)), svd.matrixU(), svd.matrixV()};
}

CartanVector vec_distance(const Point& p, const Point& q) {
  require_same_dim(p.dim(), q.dim());
  SVD svd(p.inv_sqrt() * q.sqrt());
  RealVector a;
  cartan_from_svd(svd.singularValues(), a);
  return CartanVector(std::move(a));
}

double riem_distance(const Point& p, const Point& q) { return vec_distance(p, q).norm(); }

double d_alpha(const Point& p, const Point& q) { return vec_distance(p, q).root_gap(); }

Point midpoint(const Point& p, const Point& q) {
  // p^{-1/2} q^{1/2} = U S V^dagger, so p^{-1/2} q p^{-1/2} = U S^2 U^dagger and the
  // midpoint p^{1/2} (U S U^dagger) p^{1/2} has the factor p^{1/2} U S^{1/2}.
  require_same_dim(p.dim(), q.dim());
  SVD svd(p.inv_sqrt() * q.sqrt(), Eigen::ComputeFullU);
  const RealVector half = svd.singularValues().cwiseSqrt();
  return Point::from_factor(p.sqrt() * svd.matrixU() * half.asDiagonal());
}

// ---------------------------------------------------------------- flags of segments

LineFlag zeta_flag(const Point& p, const SegmentSpectrum& pq, const Tolerances& tol) {
  if (!(pq.a.root_gap() > tol.regularity_floor)) {
    throw Error(ErrorCode::not_regular, "segment is not zeta-regular");
  }
  return LineFlag::from_vector(p.sqrt() * pq.left.col(0));
}

HyperplaneFlag reverse_iota_zeta_flag(const Point& q, const SegmentSpectrum& pq,
                                      const Tolerances& tol) {
  // q^{1/2} p^{-1/2} = (p^{-1/2} q^{1/2})^dagger, whose top left singular vector is
  // the top right singular vector of pq.
  if (!(pq.a.root_gap() > tol.regularity_floor)) {
    throw Error(ErrorCode::not_regular, "segment is not iota-zeta-regular");
  }
  return HyperplaneFlag::from_covector(pq.right.col(0).adjoint() * q.inv_sqrt());
}

LineFlag zeta_flag(const Point& p, const Point& q, const Tolerances& tol) {
  return zeta_flag(p, analyze_segment(p, q), tol);
}

HyperplaneFlag iota_zeta_flag(const Point& p, const Point& q, const Tolerances& tol) {
  return reverse_iota_zeta_flag(p, analyze_segment(q, p), tol);
}

// ---------------------------------------------------------------- angles

double cos_angle(const Point& p, const Flag& f1, const Flag& f2) {
  const double d = p.dim();
  const auto [pairing, mixed] = flag_geometry(p, f1, f2);
  const double c2 = pairing.overlap * pairing.overlap;
  const double c = mixed ? (1.0 - d * c2) / (d - 1.0) : (d * c2 - 1.0) / (d - 1.0);
  return std::clamp(c, -1.0, 1.0);
}

double angle(const Point& p, const Flag& f1, const Flag& f2) {
  // 1 - cos = d s^2 / (d-1) for equal types, 1 + cos = d s^2 / (d-1) for mixed types.
  const double d = p.dim();
  const auto [pairing, mixed] = flag_geometry(p, f1, f2);
  const double half_chord = std::min(1.0, std::sqrt(d / (2.0 * (d - 1.0))) * pairing.sine);
  const double theta = 2.0 * std::asin(half_chord);
  return mixed ? std::numbers::pi - theta : theta;
}

double segment_zeta_angle(const Point& x, const Point& a, const Point& b, FlagType type_a,
                          FlagType type_b, const Tolerances& tol) {
  auto flag = [&](const Point& y, FlagType t) -> Flag {
    if (t == FlagType::zeta) return zeta_flag(x, y, tol);
    return iota_zeta_flag(x, y, tol);
  };
  return angle(x, flag(a, type_a), flag(b, type_b));
}

bool is_transverse(const Point& p, const HyperplaneFlag& hyp, const LineFlag& line,
                   const Tolerances& tol) {
  const double d = p.dim();
  return cos_angle(p, hyp, line) < 1.0 / (d - 1.0) - tol.transversality_margin;
}

double dist_to_parallel_set(const Point& q, const HyperplaneFlag& hyp, const LineFlag& line,
                            const Tolerances& tol) {
  if (!is_transverse(q, hyp, line, tol)) {
    throw Error(ErrorCode::not_transverse, "line lies in the hyperplane");
  }
  // (d-1) cos + d sech^2(r) = 1 reduces to sech(r) = |<n, v>| at q, so
  // sinh(r) = tan of the Hermitian angle between n and v.
  const auto [pairing, mixed] = flag_geometry(q, hyp, line);
  return std::asinh(pairing.sine / pairing.overlap);
}

double ray_to_parallel_bound(double dist, double spacing) {
  if (dist < 0.0 || spacing < 0.0) {
    throw Error(ErrorCode::invalid_range, "ray_to_parallel_bound needs D, S >= 0");
  }
  return std::min(dist, std::expm1(dist) * std::exp(-spacing));
}

double zeta_angle_bound(double spacing, double dist, int dim) {
  if (!(spacing > dist) || dist < 0.0) {
    throw Error(ErrorCode::invalid_range, "zeta_angle_bound needs S > D >= 0");
  }
  return zeta0(dim) * dist / std::sinh(spacing - dist);
}

double busemann_gap_standard(const Point& y) {
  const Matrix inv = y.inverse();
  const double line_term = inv(0, 0).real();
  const double hyp_term = y.matrix()(1, 1).real();
  return -0.5 * std::log(line_term * hyp_term);
}

}  // namespace symspace
}  // namespace anosov
