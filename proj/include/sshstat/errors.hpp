#pragma once

#include <stdexcept>
#include <string>

namespace sshstat {

/// Structural problems with the input: bad schema, duplicate ids,
/// mismatched unit sets, out-of-domain parameters. Maps to CLI exit code 2.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Data that is formally valid but statistically degenerate: zero total
/// variance, unbounded F, no degrees of freedom left. Maps to CLI exit code 3.
class DegenerateDataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace sshstat
