// types.hpp — shared value types and the error hierarchy

#pragma once

#include <complex>
#include <cstdio>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace floquet_ef {

using cplx = std::complex<double>;
using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr cplx I_UNIT{0.0, 1.0};
inline constexpr double PI = 3.14159265358979323846;

/// Nuclear configuration R = (x, y).
struct NuclearPoint {
    double x{0.0};
    double y{0.0};

    friend bool operator==(const NuclearPoint&, const NuclearPoint&) = default;
};

enum class Lead { Left, Right };

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

/// (ε − h − Σ_r) could not be factorized to the required residual.
class SingularSystem : public Error {
public:
    using Error::Error;
};

class QuadratureNotConverged : public Error {
public:
    QuadratureNotConverged(const std::string& what, double estimate, double scale)
        : Error(what), error_estimate(estimate), value_scale(scale) {}
    double error_estimate;
    double value_scale;
};

class NotPositiveSemidefinite : public Error {
public:
    NotPositiveSemidefinite(const std::string& what, double min_eig)
        : Error(what), min_eigenvalue(min_eig) {}
    double min_eigenvalue;
};

class OutOfBounds : public Error {
public:
    OutOfBounds(const std::string& what, NuclearPoint at) : Error(what), point(at) {}
    NuclearPoint point;
};

/// Imaginary residue of a quantity that must be real exceeded its tolerance.
class ResidueCheckFailed : public Error {
public:
    using Error::Error;
};

namespace detail {

inline std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

}  // namespace detail

inline std::string format_point(NuclearPoint r) {
    return "(" + std::to_string(r.x) + ", " + std::to_string(r.y) + ")";
}

}  // namespace floquet_ef
