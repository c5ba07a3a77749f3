#pragma once

#include <stdexcept>
#include <string>

namespace sightkit {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad input data: malformed files, out-of-range values, broken invariants.
class ValidationError : public Error {
public:
    using Error::Error;
};

// Unparseable file content, reported with whatever position context we have.
class ParseError : public Error {
public:
    using Error::Error;
};

// Caller asked for something that needs an input it did not supply.
class UsageError : public Error {
public:
    using Error::Error;
};

// A single news source failed; aggregation records it and moves on.
class SourceError : public Error {
public:
    using Error::Error;
};

}  // namespace sightkit
