// Copyright 2026 The ragear Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RAGEAR_ERRORS_H_
#define RAGEAR_ERRORS_H_

#include <stdexcept>
#include <string>

namespace ragear {

// Root of every error the library throws deliberately.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input bytes: bad JSON, bad TSV line, bad binary header.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Well-formed input that violates a data invariant (dangling id, cycle, ...).
class IntegrityError : public Error {
 public:
  using Error::Error;
};

class NotFoundError : public Error {
 public:
  using Error::Error;
};

// Caller supplied an argument outside the operation's contract.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A constraint references a plan, discipline or course the catalogue lacks.
class ConstraintError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

// Remote service unreachable or answering garbage after all retries.
class TransportError : public Error {
 public:
  using Error::Error;
};

}  // namespace ragear

#endif  // RAGEAR_ERRORS_H_
