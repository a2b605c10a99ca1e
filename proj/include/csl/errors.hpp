#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace csl {

/// Thrown when an argument lies outside an operation's domain.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Thrown when an iterative kernel fails to converge. Carries the best
/// estimate reached so callers can report it.
class NumericError : public std::runtime_error {
public:
    NumericError(const std::string& what, double best_estimate)
        : std::runtime_error(what), best_estimate_(best_estimate) {}

    double best_estimate() const noexcept { return best_estimate_; }

private:
    double best_estimate_;
};

/// Thrown by the JSON loaders; the message names the offending field.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Non-fatal validity warnings (clamped efficiencies, out-of-range energies).
// Operations that can warn take an optional pointer to one of these.
struct Diagnostics {
    std::vector<std::string> warnings;

    void warn(std::string message) { warnings.push_back(std::move(message)); }
    bool empty() const noexcept { return warnings.empty(); }
};

}  // namespace csl
