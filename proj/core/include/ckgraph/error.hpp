// Copyright (c) ckgraph contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace ckgraph {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Raised by the spectrum construction when the input graph has a vertex that
// bases exactly one simple loop.
class ConditionKError : public Error {
  public:
    using Error::Error;
};

// Malformed graph document. `where` is either "line N" or a JSON field path.
class ParseError : public Error {
  public:
    ParseError(std::string where, const std::string& what)
        : Error(where + ": " + what), where_(std::move(where)) {}

    [[nodiscard]] const std::string& where() const noexcept { return where_; }

  private:
    std::string where_;
};

} // namespace ckgraph
