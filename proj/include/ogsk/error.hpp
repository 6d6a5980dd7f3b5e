/*
 * (C) Copyright 2026 The ogsk Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include <stdexcept>
#include <string>

namespace ogsk {

enum class ErrorCode {
  Domain,
  DecodeFailure,
  CalibrationFailure,
  ContractViolation,
  UndefinedLlr,
  Parse,
  InsufficientData,
  Config,
  Io,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ogsk
