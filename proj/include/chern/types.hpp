#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace chern {

using cdouble = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;

// bad user input or malformed configuration; maps to CLI exit code 2
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// a numerical contract was violated (gap closure, lost quantization, ...);
// maps to CLI exit code 3
struct numerical_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace chern
