#pragma once

#include <stdexcept>
#include <string>

namespace dtcwt {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Sequence or image length incompatible with the requested operation.
class InvalidLength : public Error {
public:
    using Error::Error;
};

// Filter taps violating the even-length / minimum-length invariant.
class InvalidFilter : public Error {
public:
    using Error::Error;
};

// Pyramid band shapes that do not fit together.
class StructuralError : public Error {
public:
    using Error::Error;
};

class OutOfRange : public Error {
public:
    using Error::Error;
};

// Non-finite value met during evaluation, or a quantity that is undefined
// for the given input (zero norm, all-zero magnitude image).
class NumericError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

}  // namespace dtcwt
