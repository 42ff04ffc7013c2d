// Copyright 2026 The wavesep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <stdexcept>
#include <string>

namespace wavesep {

// Every error carries a category so the command-line driver can prefix its
// message and pick an exit code.
class Error : public std::runtime_error {
 public:
  Error(std::string category, const std::string& what)
      : std::runtime_error(what), category_(std::move(category)) {}

  const std::string& category() const noexcept { return category_; }

 private:
  std::string category_;
};

#define WAVESEP_DEFINE_ERROR(Name, tag)                                   \
  class Name : public Error {                                             \
   public:                                                                \
    explicit Name(const std::string& what) : Error(tag, what) {}          \
  }

WAVESEP_DEFINE_ERROR(ConfigError, "config");
WAVESEP_DEFINE_ERROR(ShapeError, "shape");
WAVESEP_DEFINE_ERROR(ContractError, "contract");
WAVESEP_DEFINE_ERROR(DataError, "data");
WAVESEP_DEFINE_ERROR(TrainingError, "training");
WAVESEP_DEFINE_ERROR(EvaluationError, "evaluation");
WAVESEP_DEFINE_ERROR(ReportError, "report");
WAVESEP_DEFINE_ERROR(ArgumentError, "argument");
WAVESEP_DEFINE_ERROR(IoError, "io");

#undef WAVESEP_DEFINE_ERROR

}  // namespace wavesep
