#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace sparq {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// A list of points in R^d, one point per row.
using Points = Eigen::MatrixXd;

using Rng = std::mt19937_64;

/// Malformed arguments: dimension mismatches, out-of-range indices, bad sizes.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Invalid configuration values (experiment files, policy parameters).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Factorization or conditioning failures.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Every candidate subset has a singular principal submatrix.
class DegenerateError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Independent generator for a named stream of a seeded run.
Rng make_stream(std::uint64_t seed, std::uint64_t stream_id);

/// Standard-normal draw; a fresh distribution per call keeps the stream
/// free of cached state.
double standard_normal(Rng& rng);

/// Uniform draw in [0, 1).
double uniform01(Rng& rng);

}  // namespace sparq
