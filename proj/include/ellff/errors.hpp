#pragma once

#include <stdexcept>
#include <string>

namespace ellff {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// bad user input: parse errors, unsupported parameters
struct InputError : Error {
    using Error::Error;
};

// an exact identity that should hold did not
struct VerificationError : Error {
    using Error::Error;
};

struct PoleError : Error {
    using Error::Error;
};

// additive reduction in residue characteristic 2 or 3 with no annotation
struct UnclassifiedFiberError : Error {
    std::string place;
    UnclassifiedFiberError(const std::string& where, const std::string& msg)
        : Error(msg), place(where) {}
};

}  // namespace ellff
