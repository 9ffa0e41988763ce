///////////////////////////////////////////////////////////////////////
// (C) Copyright 2026, The Scribe Authors.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
///////////////////////////////////////////////////////////////////////

#pragma once

#include <stdexcept>
#include <string>

namespace scribe {

// Root of every error the library raises. The CLI maps the subclasses onto
// exit codes: InvalidArgument -> 1, DataError -> 2, anything else -> 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller passed a value outside an operation's domain.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Input data on disk or in a manifest is inconsistent or missing.
class DataError : public Error {
 public:
  using Error::Error;
};

}  // namespace scribe
