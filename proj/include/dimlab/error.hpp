#pragma once

#include <stdexcept>
#include <string>

namespace dimlab {

// Base of everything the library throws on purpose.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Input outside the documented domain of an operation.
class ParameterError : public Error {
public:
    using Error::Error;
};

// A size guard tripped (point caps, solver limits).
class CapacityError : public Error {
public:
    using Error::Error;
};

// Incompatible model choice, e.g. the exact planar exponent with n != 2.
class ModelError : public Error {
public:
    using Error::Error;
};

// An internal invariant failed. Indicates a bug rather than bad input.
class ConsistencyError : public Error {
public:
    using Error::Error;
};

namespace detail {
[[noreturn]] inline void fail_param(const std::string& what) { throw ParameterError(what); }
inline void require(bool ok, const std::string& what) {
    if (!ok) throw ParameterError(what);
}
}  // namespace detail

}  // namespace dimlab
