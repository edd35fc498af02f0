#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace elemnorm {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

enum class ErrorCode {
    InvalidInput,
    NotPSD,
    DimMismatch,
    SingularBase,
    InvalidProjection,
    IllConditioned,
    InvalidState,
    ResourceGuard,
};

const char* to_string(ErrorCode code);

/// Single exception type for the library; `code()` distinguishes the cause.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace elemnorm
