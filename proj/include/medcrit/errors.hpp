#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace medcrit {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed SCM document, CSV file or parameter string.
class ParseError : public Error {
public:
    using Error::Error;
};

/// A model failed validation; `violations()` lists every broken invariant.
class InvalidModelError : public Error {
public:
    explicit InvalidModelError(std::vector<std::string> violations);
    [[nodiscard]] const std::vector<std::string>& violations() const noexcept { return violations_; }

private:
    std::vector<std::string> violations_;
};

/// An argument lies outside the domain an operation is defined on.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A conditional quantity was requested on a stratum with zero probability.
class DegenerateStratumError : public Error {
public:
    using Error::Error;
};

/// Unit enumeration would exceed the configured cap.
class SizeError : public Error {
public:
    using Error::Error;
};

/// An EffectReport identity failed; signals an engine bug.
class InternalConsistencyError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace medcrit
