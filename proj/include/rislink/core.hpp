#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace rislink {

template <typename Scalar>
using Vec3T = Eigen::Matrix<Scalar, 3, 1>;
using Vec3 = Vec3T<double>;

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;

template <typename Scalar>
inline constexpr Scalar kPi = std::numbers::pi_v<Scalar>;

enum class ErrorKind {
  InvalidArgument,
  DomainError,
  DegenerateGeometry,
  DegenerateTriangle,
  ShadowedPanel,
  FarFieldViolation,
  DimensionMismatch,
  ZeroChannel,
  NoConvergence,
  EmptyFeasible,
  TooLarge,
  ConfigError,
  IoError,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::DegenerateGeometry: return "DegenerateGeometry";
    case ErrorKind::DegenerateTriangle: return "DegenerateTriangle";
    case ErrorKind::ShadowedPanel: return "ShadowedPanel";
    case ErrorKind::FarFieldViolation: return "FarFieldViolation";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::ZeroChannel: return "ZeroChannel";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::EmptyFeasible: return "EmptyFeasible";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

/// Unit phasor e^{j phase}.
template <typename Scalar>
inline std::complex<Scalar> phasor(Scalar phase) {
  return std::polar(Scalar(1), phase);
}

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double linear) { return 10.0 * std::log10(linear); }
inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }

}  // namespace rislink
