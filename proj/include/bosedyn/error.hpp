// Copyright 2026 The bosedyn Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace bosedyn {

enum class ErrorCode {
  DimensionOutOfRange,
  MemoryCapExceeded,
  InvalidArgument,
  ZeroNormOrbital,
  PermutationBudgetExceeded,
  GridMismatch,
  NonFiniteValues,
  InsufficientSnapshots,
  IndexOutOfRange,
  ForcingSampleGap,
  ParseError,
  ValidationError,
  UnknownOracle,
  BudgetExceeded,
  IoError,
};

const char* to_string(ErrorCode code) noexcept;

/// Exception carrying a machine-checkable code next to the human message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace bosedyn
