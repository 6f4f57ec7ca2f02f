#pragma once

#include <stdexcept>
#include <string>

namespace echograph {

// Base class for everything thrown by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input: bad syntax, missing field, unparseable value.
class ParseError : public Error {
public:
    explicit ParseError(const std::string& msg) : Error(msg) {}
};

// Referential integrity violated (dangling id, duplicate id).
class IntegrityError : public Error {
public:
    explicit IntegrityError(const std::string& msg) : Error(msg) {}
};

// A caller broke an operation's precondition.
class ContractError : public Error {
public:
    explicit ContractError(const std::string& msg) : Error(msg) {}
};

// An argument value is outside its documented domain.
class ParameterError : public Error {
public:
    explicit ParameterError(const std::string& msg) : Error(msg) {}
};

// A numerical routine could not produce a usable result.
class FitError : public Error {
public:
    explicit FitError(const std::string& msg) : Error(msg) {}
};

} // namespace echograph
