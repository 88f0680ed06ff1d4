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

#include "defarg/theory_format.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

namespace defarg {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_words(std::string_view s) {
  std::istringstream is{std::string(s)};
  std::vector<std::string> out;
  for (std::string w; is >> w;) out.push_back(w);
  return out;
}

double parse_number(std::string_view s) {
  s = trim(s);
  double v = 0;
  // from_chars for double is available in libstdc++ 11.
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw Error("invalid number '" + std::string(s) + "'");
  return v;
}

std::string number_text(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

bool starts_with_keyword(std::string_view line, std::string_view kw) {
  return line.starts_with(kw) && (line.size() == kw.size() || line[kw.size()] == ':' || line[kw.size()] == ' ');
}

}  // namespace

DefaultRule parse_default_body(std::string id, std::string_view body, const Signature& sig) {
  const auto arrow = body.find("~>");
  if (arrow == std::string_view::npos) throw Error("default needs 'SCOPE ~> CONCLUSION'");
  DefaultRule rule;
  rule.id = std::move(id);
  rule.scope = parse_formula(trim(body.substr(0, arrow)), sig);
  std::string_view rest = body.substr(arrow + 2);
  const auto bracket = rest.find('[');
  rule.conclusion = parse_formula(trim(rest.substr(0, bracket)), sig);
  if (bracket == std::string_view::npos) return rule;
  rest = rest.substr(bracket);
  while (!(rest = trim(rest)).empty()) {
    if (rest.front() != '[') throw Error("expected '[' before option");
    const auto close = rest.find(']');
    if (close == std::string_view::npos) throw Error("unterminated option");
    const std::string_view opt = trim(rest.substr(1, close - 1));
    rest = rest.substr(close + 1);
    const auto colon = opt.find(':');
    const std::string_view key = trim(opt.substr(0, colon));
    const std::string_view value = colon == std::string_view::npos ? std::string_view{} : trim(opt.substr(colon + 1));
    if (key == "except") {
      std::size_t start = 0;
      while (start <= value.size()) {
        const auto comma = value.find(',', start);
        rule.exception_sets.push_back(parse_formula(trim(value.substr(start, comma - start)), sig));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
      }
    } else if (key == "surprise") {
      rule.surprise_budget = parse_number(value);
    } else if (key == "homogeneous") {
      rule.homogeneous = true;
    } else if (key == "heterogeneous") {
      rule.homogeneous = false;
    } else if (key == "neg") {
      rule.polarity = Polarity::not_normally;
    } else if (key == "provenance") {
      rule.provenance = provenance_from_string(value);
    } else {
      throw Error("unknown default option '" + std::string(key) + "'");
    }
  }
  return rule;
}

std::string to_default_body(const DefaultRule& rule) {
  std::string out = to_string(rule.scope) + " ~> " + to_string(rule.conclusion);
  if (!rule.exception_sets.empty()) {
    out += " [except: ";
    for (std::size_t i = 0; i < rule.exception_sets.size(); ++i)
      out += (i ? ", " : "") + to_string(rule.exception_sets[i]);
    out += "]";
  }
  if (rule.surprise_budget != 0.0) out += " [surprise: " + number_text(rule.surprise_budget) + "]";
  if (!rule.homogeneous) out += " [heterogeneous]";
  if (rule.polarity == Polarity::not_normally) out += " [neg]";
  if (rule.provenance != Provenance::plain) out += " [provenance: " + std::string(to_string(rule.provenance)) + "]";
  return out;
}

DefaultTheory parse_theory(std::string_view text) {
  std::optional<Signature> sig;
  std::vector<Formula> background;
  SizePolicy policy;
  std::vector<std::pair<std::size_t, DefaultRule>> rules;
  std::vector<std::tuple<std::size_t, std::string, Formula>> blocks;

  std::istringstream is{std::string(text)};
  std::string raw;
  std::size_t lineno = 0;
  auto need_sig = [&](std::size_t ln) -> const Signature& {
    if (!sig) throw TheoryFormatError("'atoms:' must come first", ln);
    return *sig;
  };
  while (std::getline(is, raw)) {
    ++lineno;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    try {
      if (starts_with_keyword(line, "atoms")) {
        if (sig) throw TheoryFormatError("duplicate 'atoms:' line", lineno);
        const auto colon = line.find(':');
        if (colon == std::string_view::npos) throw TheoryFormatError("expected 'atoms:'", lineno);
        sig = Signature(split_words(line.substr(colon + 1)));
      } else if (starts_with_keyword(line, "background")) {
        const auto colon = line.find(':');
        if (colon == std::string_view::npos) throw TheoryFormatError("expected 'background:'", lineno);
        background.push_back(parse_formula(trim(line.substr(colon + 1)), need_sig(lineno)));
      } else if (starts_with_keyword(line, "policy")) {
        if (!rules.empty()) throw TheoryFormatError("'policy:' must precede the defaults", lineno);
        const auto colon = line.find(':');
        if (colon == std::string_view::npos) throw TheoryFormatError("expected 'policy:'", lineno);
        for (const auto& kv : split_words(line.substr(colon + 1))) {
          const auto eq = kv.find('=');
          if (eq == std::string::npos) throw TheoryFormatError("expected key=value in policy", lineno);
          const std::string key = kv.substr(0, eq);
          const double v = parse_number(std::string_view(kv).substr(eq + 1));
          if (key == "most") policy.most = v;
          else if (key == "small") policy.small = v;
          else if (key == "very_small") policy.very_small = v;
          else throw TheoryFormatError("unknown policy key '" + key + "'", lineno);
        }
      } else if (starts_with_keyword(line, "block")) {
        auto rest = trim(line.substr(5));
        const auto at = rest.find(" at ");
        if (at == std::string_view::npos) throw TheoryFormatError("expected 'block ID at FORMULA'", lineno);
        blocks.emplace_back(lineno, std::string(trim(rest.substr(0, at))),
                            parse_formula(trim(rest.substr(at + 4)), need_sig(lineno)));
      } else {
        const auto colon = line.find(':');
        if (colon == std::string_view::npos) throw TheoryFormatError("unrecognised line", lineno);
        std::string id(trim(line.substr(0, colon)));
        if (id.empty() || id.find(' ') != std::string::npos) throw TheoryFormatError("invalid default id", lineno);
        rules.emplace_back(lineno, parse_default_body(std::move(id), line.substr(colon + 1), need_sig(lineno)));
      }
    } catch (const TheoryFormatError&) {
      throw;
    } catch (const Error& e) {
      throw TheoryFormatError(e.what(), lineno);
    }
  }
  if (!sig) throw TheoryFormatError("missing 'atoms:' line", lineno + 1);
  DefaultTheory theory;
  try {
    theory = DefaultTheory(*sig, std::move(background), policy);
  } catch (const Error& e) {
    throw TheoryFormatError(e.what(), 1);
  }
  for (auto& [ln, rule] : rules) {
    try {
      theory = attach(std::move(theory), std::move(rule));
    } catch (const Error& e) {
      throw TheoryFormatError(e.what(), ln);
    }
  }
  for (auto& [ln, id, f] : blocks) {
    try {
      theory = block_inheritance(std::move(theory), id, std::move(f));
    } catch (const Error& e) {
      throw TheoryFormatError(e.what(), ln);
    }
  }
  return theory;
}

DefaultTheory load_theory(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open theory file '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_theory(ss.str());
}

std::string to_theory_text(const DefaultTheory& theory) {
  std::ostringstream os;
  os << "atoms:";
  for (const auto& a : theory.signature().atoms()) os << ' ' << a;
  os << '\n';
  const SizePolicy& p = theory.policy();
  if (!(p == SizePolicy{}))
    os << "policy: most=" << number_text(p.most) << " small=" << number_text(p.small)
       << " very_small=" << number_text(p.very_small) << '\n';
  for (const auto& b : theory.background()) os << "background: " << to_string(b) << '\n';
  for (const auto& d : theory.defaults()) os << d.id << ": " << to_default_body(d) << '\n';
  for (const auto& b : theory.blocks()) os << "block " << b.default_id << " at " << to_string(b.at) << '\n';
  return os.str();
}

}  // namespace defarg
