#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace anosov {

// All matrices are stored over C; real inputs simply carry zero imaginary parts.
using Scalar = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RowVector = Eigen::RowVectorXcd;
using RealVector = Eigen::VectorXd;

enum class Field { real, complex };

std::string to_string(Field f);
Field field_from_string(const std::string& s);

enum class ErrorCode {
  invalid_input,
  eigen_failure,
  not_regular,
  not_transverse,
  invalid_range,
  invalid_aux,
  eps_too_large,
  tolerance_collision,
  unknown_letter,
  wrong_length,
  empty_survey,
  regularity_obstruction,
  config,
  io,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Numerical thresholds shared by the geometry layer.
struct Tolerances {
  double det = 1e-9;               // |det - 1| allowed on inputs
  double sym = 1e-9;               // max |X - X^dagger| for points
  double regularity_floor = 1e-8;  // minimal root gap for flags to exist
  double transversality_margin = 0.0;
};

}  // namespace anosov
