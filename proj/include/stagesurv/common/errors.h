/*
 * Copyright 2026 The Stagesurv Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef STAGESURV_COMMON_ERRORS_H_
#define STAGESURV_COMMON_ERRORS_H_

#include <stdexcept>
#include <string>

namespace stagesurv {

// Base of every error thrown by the library. The subclasses map onto the CLI
// exit codes: configuration/schema problems exit with 2, data problems with 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Input header does not match the declared schema.
class SchemaError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class DataError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public DataError {
 public:
  using DataError::DataError;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

// A learner could not be fitted on the given data (e.g. a missing class).
class FitError : public Error {
 public:
  using Error::Error;
};

}  // namespace stagesurv

#endif  // STAGESURV_COMMON_ERRORS_H_
