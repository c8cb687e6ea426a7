#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace darboux {

/// Base class for every error thrown by the toolkit.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// ---- geometry errors -------------------------------------------------------

/// |P_u x P_v| fell below eps_reg at a queried point (e.g. a cone apex).
class DegenerateParameterization : public Error {
public:
    using Error::Error;
};

/// Curve evaluation left the declared parameter rectangle of its patch.
class OutOfDomain : public Error {
public:
    using Error::Error;
};

/// Arc-length query outside [0, total_length].
class OutOfRange : public Error {
public:
    using Error::Error;
};

/// |dx/dt| fell below eps_reg at a quadrature node (cusp).
class DegenerateSpeed : public Error {
public:
    using Error::Error;
};

/// Series too short for the requested stencil.
class TooFewSamples : public Error {
public:
    using Error::Error;
};

/// Frenet angle phi requested where the curvature vanishes.
class UndefinedAngle : public Error {
public:
    using Error::Error;
};

// ---- expression language errors -------------------------------------------

/// Malformed source text. Carries the byte offset of the failure and a
/// human-readable list of what the parser would have accepted there.
class SyntaxError : public Error {
public:
    SyntaxError(const std::string& msg, std::size_t offset, std::string expected)
        : Error(msg), offset_(offset), expected_(std::move(expected)) {}
    std::size_t offset() const { return offset_; }
    const std::string& expected() const { return expected_; }

private:
    std::size_t offset_;
    std::string expected_;
};

/// Identifier that is neither a declared variable, a constant, nor a function.
class UnknownIdentifier : public Error {
public:
    UnknownIdentifier(const std::string& msg, std::size_t offset) : Error(msg), offset_(offset) {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

/// Expression tree nested deeper than the hard limit.
class DepthExceeded : public Error {
public:
    using Error::Error;
};

/// Numeric domain violation during evaluation (log of a non-positive value,
/// division by zero, ...). Carries the source offset of the subexpression.
class DomainError : public Error {
public:
    DomainError(const std::string& msg, std::size_t offset) : Error(msg), offset_(offset) {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

// ---- pair construction errors ----------------------------------------------

/// lambda = 0 collapses the offset pair onto a single curve.
class ZeroLambda : public Error {
public:
    using Error::Error;
};

/// 1 - lambda*k_n1 vanished at some station: the correspondence speed
/// degenerates there. Carries the offending arc length.
class SingularOffset : public Error {
public:
    SingularOffset(const std::string& msg, double s1) : Error(msg), s1_(s1) {}
    double station() const { return s1_; }

private:
    double s1_;
};

/// Ruled sweep is non-regular inside the declared strip.
class DegenerateSweep : public Error {
public:
    using Error::Error;
};

/// Closest-point matching between two candidate curves is ambiguous
/// (or the offset is zero).
class NoCorrespondence : public Error {
public:
    using Error::Error;
};

/// Catalog lookup with a name absent from list_entries().
class UnknownEntry : public Error {
public:
    using Error::Error;
};

// ---- shared numerical constants ---------------------------------------------

/// Regularity floor in model units: well above double-precision noise,
/// well below any catalog feature size.
inline constexpr double kEpsReg = 1e-9;

/// Below this curvature the Frenet frame is reported undefined instead of
/// dividing by a near-zero |x' x x''|.
inline constexpr double kEpsCurv = 1e-8;

/// Default sup-norm tolerance for geodesic/asymptotic/principal classification.
inline constexpr double kTolClass = 1e-6;

/// Default tolerance on |<g, n1>| - 1 for the Mannheim coincidence.
inline constexpr double kTolCoincide = 1e-7;

}  // namespace darboux
