#pragma once

#include <stdexcept>
#include <string>

namespace discovery {

// Malformed expert spec or problem instance.
class InvalidInstance : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Good-Turing estimate requested for an expert that was never pulled.
class UndefinedEstimate : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class InvalidDelta : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Proportion profile not sorted descending or not inside (0,1).
class InvalidProfile : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InvalidLambda : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class RootNotBracketed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A fixed sample-path prefix ended before the requested threshold was met.
class PathExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class HorizonTooShort : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Operation needs disjoint interesting supports across experts.
class AssumptionViolated : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace discovery
