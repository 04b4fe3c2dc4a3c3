/*
 * Copyright 2026 The vtrust Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace vtrust {

/// Failure categories shared by the core library and its C front end.
enum class ErrorCode {
  InvalidArgument,
  UndefinedOperand,
  InvalidWeights,
  ParseError,
  EmptyDataset,
  MissingDates,
  UnknownComponent,
  EmptyHistory,
  InvalidAlpha,
  NegativePrediction,
  WindowOutOfRange,
  EmptyInput,
  DivisionByZero,
  SchemaError,
  Unsimplifiable,
  NotReadOnce,
  MissingOpinion,
  IoError,
  Busy,
};

const char* to_string(ErrorCode code) noexcept;

/// True for errors caused by bad input data rather than by a computation.
bool is_data_error(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Malformed input; carries the 1-based line number when one is known.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& message,
                      std::optional<std::size_t> line = std::nullopt);

  std::optional<std::size_t> line() const noexcept { return line_; }

 private:
  std::optional<std::size_t> line_;
};

}  // namespace vtrust
