#ifndef GREENLAB_CORE_HPP
#define GREENLAB_CORE_HPP

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace greenlab {

/// Largest projective dimension handled by the lab (P^1 and P^2).
inline constexpr int kMaxDim = 2;
inline constexpr int kMaxLift = kMaxDim + 1;

template <typename Real>
using BasicComplex = std::complex<Real>;

// Small dynamic vectors/matrices with a compile-time capacity, so the hot
// loops (orbit iteration, chart maps) never touch the heap.
template <typename Real>
using BasicLiftVector = Eigen::Matrix<BasicComplex<Real>, Eigen::Dynamic, 1, 0, kMaxLift, 1>;
template <typename Real>
using BasicLiftMatrix =
    Eigen::Matrix<BasicComplex<Real>, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxLift, kMaxLift>;
template <typename Real>
using BasicChartVector = Eigen::Matrix<BasicComplex<Real>, Eigen::Dynamic, 1, 0, kMaxDim, 1>;
template <typename Real>
using BasicChartMatrix =
    Eigen::Matrix<BasicComplex<Real>, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;
template <typename Real>
using BasicFrameMatrix =
    Eigen::Matrix<BasicComplex<Real>, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxLift, kMaxDim>;

using Complex = BasicComplex<double>;
using LiftVector = BasicLiftVector<double>;
using LiftMatrix = BasicLiftMatrix<double>;
using ChartVector = BasicChartVector<double>;
using ChartMatrix = BasicChartMatrix<double>;
using FrameMatrix = BasicFrameMatrix<double>;
using RealVector = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxDim, 1>;

/// Error categories; the CLI maps them onto exit codes.
enum class ErrorKind { config, numeric, unsupported };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Invalid input to a mathematical operation (zero vector, singular curve, ...).
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorKind::numeric, what) {}
};

class NumericError : public Error {
 public:
  explicit NumericError(const std::string& what) : Error(ErrorKind::numeric, what) {}
};

class UnsupportedError : public Error {
 public:
  explicit UnsupportedError(const std::string& what) : Error(ErrorKind::unsupported, what) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorKind::config, what) {}
};

/// Warning sink. Quiet by default so tests stay readable; the CLI turns it on.
void set_warnings_enabled(bool enabled);
void warn(const std::string& message);

}  // namespace greenlab

#endif  // GREENLAB_CORE_HPP
