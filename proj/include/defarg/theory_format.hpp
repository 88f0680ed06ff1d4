/*
Copyright 2026 The defarg Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "defarg/default_theory.hpp"

namespace defarg {

/// Error in a theory document; `line` is 1-based.
class TheoryFormatError : public Error {
 public:
  TheoryFormatError(const std::string& message, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + message), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Reads the line-oriented theory format:
///
///     # comment
///     atoms: b p f
///     background: p -> b
///     policy: most=0.7 small=0.3 very_small=0.05
///     d1: b ~> f
///     d2: p ~> ~f [except: F1, F2] [surprise: 0.01] [heterogeneous] [neg] [provenance: expert]
///     block d1 at p & q
///
/// `atoms:` must precede every formula; `policy:` must precede the defaults.
DefaultTheory parse_theory(std::string_view text);
DefaultTheory load_theory(const std::filesystem::path& path);

/// Inverse of parse_theory up to whitespace and comments.
std::string to_theory_text(const DefaultTheory& theory);

/// Parses the right-hand side of a default line ("SCOPE ~> CONCLUSION [opts]").
DefaultRule parse_default_body(std::string id, std::string_view body, const Signature& sig);
std::string to_default_body(const DefaultRule& rule);

}  // namespace defarg
