// dent/error.h

// Copyright 2026  dent authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef DENT_ERROR_H_
#define DENT_ERROR_H_

#include <stdexcept>
#include <string>
#include <vector>

namespace dent {

// Precondition violations on arguments (bad ratio, wrong bin count, ...).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Problems with input data: unreadable files, insufficient chunks, schema
// violations. Maps to the "data" exit class of the command line tool.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Non-finite losses or gradients. Maps to the "numerical" exit class.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Parameter-file validation failure. Carries every violation found, not just
// the first one.
class SchemaError : public DataError {
 public:
  explicit SchemaError(std::vector<std::string> violations);
  const std::vector<std::string> &violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

}  // namespace dent

#endif  // DENT_ERROR_H_
