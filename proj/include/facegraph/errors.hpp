#pragma once

#include <stdexcept>
#include <string>

namespace facegraph {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// File missing or unreadable.
class IoError : public Error {
public:
    using Error::Error;
};

/// Input bytes do not conform to the expected file format.
class FormatError : public Error {
public:
    using Error::Error;
};

/// Well-formed input the pipeline does not handle (e.g. 16-bit PGM).
class UnsupportedError : public Error {
public:
    using Error::Error;
};

/// Dempster combination of totally conflicting evidence (K = 1).
class ConflictError : public Error {
public:
    using Error::Error;
};

}  // namespace facegraph
