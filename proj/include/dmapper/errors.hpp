#pragma once

#include <stdexcept>
#include <string>

namespace dmapper {

// Base class for every failure the library can raise; the CLI maps these to
// exit code 1 with the message on stderr.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Cover construction
class InvalidRange : public Error {
public:
    using Error::Error;
};
class OverlapTooWide : public Error {
public:
    using Error::Error;
};

// Parameter outside its stated domain (gain, resolution, Amdahl fraction, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

// Graph algebra
class InvalidPartition : public Error {
public:
    using Error::Error;
};

// Mapper pipeline
class CoverDoesNotCoverRange : public Error {
public:
    using Error::Error;
};
class MergeMismatch : public Error {
public:
    using Error::Error;
};
class EquivalenceViolation : public Error {
public:
    using Error::Error;
};

// File ingestion. ParseError carries the 1-based line of the offending row.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, long line)
        : Error(msg + " (line " + std::to_string(line) + ")"), line_(line) {}
    long line() const { return line_; }

private:
    long line_;
};
class FormatError : public Error {
public:
    using Error::Error;
};
class CountMismatch : public Error {
public:
    using Error::Error;
};
class AxisOutOfBounds : public Error {
public:
    using Error::Error;
};
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace dmapper
