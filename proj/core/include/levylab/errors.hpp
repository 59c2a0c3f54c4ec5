#pragma once

#include <stdexcept>
#include <string>

namespace levylab {

// Base for every error raised by the library. Harness code catches this to
// mark a single experiment as failed without aborting its siblings.
class LevyLabError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public LevyLabError {
 public:
  using LevyLabError::LevyLabError;
};

class DivergenceError : public LevyLabError {
 public:
  using LevyLabError::LevyLabError;
};

class UnsupportedModel : public LevyLabError {
 public:
  using LevyLabError::LevyLabError;
};

class TruncationError : public LevyLabError {
 public:
  using LevyLabError::LevyLabError;
};

class StepError : public LevyLabError {
 public:
  using LevyLabError::LevyLabError;
};

class NotApplicable : public LevyLabError {
 public:
  using LevyLabError::LevyLabError;
};

class MethodUnavailable : public LevyLabError {
 public:
  using LevyLabError::LevyLabError;
};

}  // namespace levylab
