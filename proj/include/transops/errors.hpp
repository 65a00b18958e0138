#pragma once

#include <stdexcept>
#include <string>

namespace transops {

/// Invalid parameter value (out-of-range exponent, negative degree, ...).
class parameter_error : public std::invalid_argument {
public:
    explicit parameter_error(const std::string& msg) : std::invalid_argument(msg) {}
};

/// Request outside the supported capability range (dimension, weight class).
class capability_error : public std::domain_error {
public:
    explicit capability_error(const std::string& msg) : std::domain_error(msg) {}
};

/// Inconsistent configuration (insufficient quadrature order, bad config file).
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numerical failure inside the library (eigen-solve breakdown, non-finite value).
class internal_error : public std::runtime_error {
public:
    explicit internal_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace transops
