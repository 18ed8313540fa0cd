#pragma once

#include <stdexcept>
#include <string>

namespace tropabel {

// Malformed or inconsistent user input (CLI exit code 2).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The firing loop of qs_reduce ran past its cap.
class IterationCap : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NoneFound : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MultipleFound : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotPrincipal : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A proven invariant failed at runtime; always an implementation bug.
class AssertionFailure : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class UnsupportedFormat : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotInSemigroup : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Degenerate : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotUnimodular : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void ensure(bool cond, const std::string& what) {
  if (!cond) throw AssertionFailure(what);
}

}  // namespace tropabel
