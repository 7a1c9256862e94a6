#pragma once

#include <stdexcept>
#include <string>

namespace peaksync {

/// Malformed input text (CSV cells, binary headers).
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A value or configuration breaks a documented invariant.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The filesystem refused a read or write.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool condition, const std::string& message) {
    if (!condition) throw ValidationError(message);
}

}  // namespace detail
}  // namespace peaksync
