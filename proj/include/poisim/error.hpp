#pragma once

#include <stdexcept>
#include <string>

namespace poisim {

/// Base class for every error the library raises deliberately.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed input bytes (JSON syntax, unreadable file, non-URL string).
class ParseError : public Error {
public:
  explicit ParseError(const std::string& what) : Error(what) {}
};

/// Well-formed input that violates cross-referential consistency
/// (dangling ids, duplicate keys, domain/url mismatches).
class IntegrityError : public Error {
public:
  explicit IntegrityError(const std::string& what) : Error(what) {}
};

/// Caller violated a documented precondition (empty input set, k < 1, ...).
class PreconditionError : public Error {
public:
  explicit PreconditionError(const std::string& what) : Error(what) {}
};

/// Target selection found no viable attack surface in the requested cluster.
class NoTargetError : public Error {
public:
  explicit NoTargetError(const std::string& what) : Error(what) {}
};

/// Generated or supplied content failed a semantic validation gate.
class ValidationError : public Error {
public:
  explicit ValidationError(const std::string& what) : Error(what) {}
};

}  // namespace poisim
