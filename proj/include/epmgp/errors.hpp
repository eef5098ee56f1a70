#pragma once

#include <stdexcept>
#include <string>

namespace epmgp {

// Matrix is not positive definite even after the one-shot jitter retry.
class NotPositiveDefinite : public std::runtime_error {
public:
    explicit NotPositiveDefinite(const std::string& what) : std::runtime_error(what) {}
};

// The interval lies so far in the Gaussian tail that its mass underflows
// below 1e-300 even through the scaled-erfc log-domain path.
class TailUnderflow : public std::runtime_error {
public:
    explicit TailUnderflow(const std::string& what) : std::runtime_error(what) {}
};

// Problem cannot be reduced to a rectangle probability (m > n or the
// constraint matrix is rank deficient); callers fall back to rejection MC.
class NotReducible : public std::runtime_error {
public:
    explicit NotReducible(const std::string& what) : std::runtime_error(what) {}
};

// Requested method does not support the given inputs (e.g. analytic
// orthants outside n = 2, 3).
class Unsupported : public std::runtime_error {
public:
    explicit Unsupported(const std::string& what) : std::runtime_error(what) {}
};

// Invalid user input; `field` names the offending field for CLI messages.
class ValidationError : public std::runtime_error {
public:
    ValidationError(std::string field, const std::string& what)
        : std::runtime_error(what), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

// Removing alpha_i times the site from the marginal left a non-positive
// precision; the factor's update is skipped for the sweep.
class NegativeCavityVariance : public std::runtime_error {
public:
    explicit NegativeCavityVariance(const std::string& what) : std::runtime_error(what) {}
};

// A log-partition term came out NaN/inf; signals failed convergence upstream.
class NonFinite : public std::runtime_error {
public:
    explicit NonFinite(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace epmgp
