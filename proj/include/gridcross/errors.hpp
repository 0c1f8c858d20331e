#pragma once

#include <stdexcept>
#include <string>

namespace gridcross {

/// Malformed input, violated precondition, or a graph that fails a contract check.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A desk-scale enumeration limit was hit. Never silently truncated.
class CapExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace gridcross
