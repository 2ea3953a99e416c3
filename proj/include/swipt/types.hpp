#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace swipt
{

using cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

/// Raised when an argument lies outside the mathematical domain of an operation.
class DomainError : public std::domain_error
{
public:
    using std::domain_error::domain_error;
};

/// Raised when a numeric routine cannot produce a finite result.
class NumericError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input files, specs or inconsistent dimensions.
class FormatError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

inline constexpr double kSpeedOfLight = 3e8;

} // namespace swipt
