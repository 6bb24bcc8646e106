#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace spadwm {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParameterError : public Error { using Error::Error; };
class IndexError : public Error { using Error::Error; };
class ShapeError : public Error { using Error::Error; };
class ConsistencyError : public Error { using Error::Error; };
class AddressError : public Error { using Error::Error; };
class UnsupportedConfigError : public Error { using Error::Error; };
class LayoutError : public Error { using Error::Error; };
class CapacityError : public Error { using Error::Error; };
class LengthError : public Error { using Error::Error; };
class UndefinedSensitivityError : public Error { using Error::Error; };
class IoError : public Error { using Error::Error; };
class WorkspaceError : public Error { using Error::Error; };

/// Malformed input file. Carries the byte offset where parsing stopped.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : Error(what + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

class UnsupportedDepthError : public ParseError {
public:
    using ParseError::ParseError;
};

}  // namespace spadwm
