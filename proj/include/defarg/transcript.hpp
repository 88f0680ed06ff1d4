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

#include "json.hpp"

#include "defarg/preference.hpp"
#include "defarg/protocol.hpp"

namespace defarg {

/// Malformed or inconsistent transcript. `line` is 1-based, 0 when unknown.
class TranscriptError : public Error {
 public:
  TranscriptError(std::size_t line, const std::string& message)
      : Error(line ? "line " + std::to_string(line) + ": " + message : message), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

inline constexpr int kTranscriptVersion = 1;

void to_json(nlohmann::json& j, const Participant& p);
void from_json(const nlohmann::json& j, Participant& p);
void to_json(nlohmann::json& j, const DefaultSpec& s);
void from_json(const nlohmann::json& j, DefaultSpec& s);
void to_json(nlohmann::json& j, const AttackDescriptor& a);
void from_json(const nlohmann::json& j, AttackDescriptor& a);
void to_json(nlohmann::json& j, const DefenseDescriptor& d);
void from_json(const nlohmann::json& j, DefenseDescriptor& d);
void to_json(nlohmann::json& j, const Elaboration& e);
void from_json(const nlohmann::json& j, Elaboration& e);
void to_json(nlohmann::json& j, const Move& m);
void from_json(const nlohmann::json& j, Move& m);
void to_json(nlohmann::json& j, const Event& e);
void from_json(const nlohmann::json& j, Event& e);
void to_json(nlohmann::json& j, const SessionConfig& c);
void from_json(const nlohmann::json& j, SessionConfig& c);
void to_json(nlohmann::json& j, const Verdict& v);

nlohmann::json state_to_json(const SessionState& state);
/// Cells with their μ/o split, Hasse edges, and generating packet pairs.
nlohmann::json hierarchy_to_json(const PreferentialModel& model);

/// Header line, configuration line, then one line per committed move or close.
std::string save_transcript(const SessionState& state);
/// Replays every recorded move and checks the recorded events against the replay.
SessionState load_transcript(std::string_view text);
void write_transcript_file(const std::filesystem::path& path, const SessionState& state);
SessionState read_transcript_file(const std::filesystem::path& path);

}  // namespace defarg
