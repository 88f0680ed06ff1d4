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

#include "defarg/transcript.hpp"

#include <fstream>
#include <sstream>

namespace defarg {

using nlohmann::json;

void to_json(json& j, const Participant& p) {
  j = {{"id", p.id}, {"name", p.name}, {"role", to_string(p.role)}};
}

void from_json(const json& j, Participant& p) {
  p.id = j.at("id").get<std::string>();
  p.name = j.value("name", p.id);
  p.role = role_from_string(j.value("role", std::string("participant")));
}

void to_json(json& j, const DefaultSpec& s) {
  j = {{"scope", s.scope},       {"conclusion", s.conclusion}, {"negative", s.negative},
       {"exceptions", s.exceptions}, {"surprise", s.surprise},   {"homogeneous", s.homogeneous}};
}

void from_json(const json& j, DefaultSpec& s) {
  s.scope = j.value("scope", std::string("true"));
  s.conclusion = j.at("conclusion").get<std::string>();
  s.negative = j.value("negative", false);
  s.exceptions = j.value("exceptions", std::vector<std::string>{});
  s.surprise = j.value("surprise", 0.0);
  s.homogeneous = j.value("homogeneous", true);
}

void to_json(json& j, const AttackDescriptor& a) {
  j = {{"target", a.target},     {"component", to_string(a.component)}, {"mode", to_string(a.mode)},
       {"premises", a.premises}, {"consequence", a.consequence},        {"elaboration", a.elaboration}};
}

void from_json(const json& j, AttackDescriptor& a) {
  a.target = j.at("target").get<std::string>();
  a.component = attack_component_from_string(j.value("component", std::string("conclusion")));
  a.mode = attack_mode_from_string(j.value("mode", std::string("prove-negation")));
  a.premises = j.value("premises", std::vector<std::string>{});
  a.consequence = j.value("consequence", std::string());
  a.elaboration = j.value("elaboration", std::string());
}

void to_json(json& j, const DefenseDescriptor& d) {
  j = {{"target", d.target}, {"mode", to_string(d.mode)}, {"premises", d.premises}, {"justification", d.justification}};
}

void from_json(const json& j, DefenseDescriptor& d) {
  d.target = j.at("target").get<std::string>();
  d.mode = defense_mode_from_string(j.value("mode", std::string("prove")));
  d.premises = j.value("premises", std::vector<std::string>{});
  d.justification = j.value("justification", std::string());
}

void to_json(json& j, const Elaboration& e) {
  j = {{"kind", to_string(e.kind)}, {"target", e.target}, {"content", e.content}};
}

void from_json(const json& j, Elaboration& e) {
  e.kind = elaboration_kind_from_string(j.at("kind").get<std::string>());
  e.target = j.at("target").get<std::string>();
  e.content = j.value("content", std::string());
}

void to_json(json& j, const Move& m) {
  j = {{"id", m.id}, {"author", m.author}, {"kind", to_string(m.kind)}};
  if (!m.content.empty()) j["content"] = m.content;
  if (m.rule) j["rule"] = *m.rule;
  if (m.attack) j["attack"] = *m.attack;
  if (m.defense) j["defense"] = *m.defense;
  if (m.elaboration) j["elaboration"] = *m.elaboration;
  if (!m.target.empty()) j["target"] = m.target;
  if (m.kind == MoveKind::retract_vote) j["vote"] = m.vote;
  if (!m.based_on.empty()) j["basedOn"] = m.based_on;
}

void from_json(const json& j, Move& m) {
  m.id = j.value("id", std::string());
  m.author = j.at("author").get<std::string>();
  m.kind = move_kind_from_string(j.at("kind").get<std::string>());
  m.content = j.value("content", std::string());
  if (j.contains("rule")) m.rule = j.at("rule").get<DefaultSpec>();
  if (j.contains("attack")) m.attack = j.at("attack").get<AttackDescriptor>();
  if (j.contains("defense")) m.defense = j.at("defense").get<DefenseDescriptor>();
  if (j.contains("elaboration")) m.elaboration = j.at("elaboration").get<Elaboration>();
  m.target = j.value("target", std::string());
  m.vote = j.value("vote", false);
  m.based_on = j.value("basedOn", std::vector<std::string>{});
}

void to_json(json& j, const Event& e) {
  j = {{"type", e.type}};
  if (!e.ref.empty()) j["ref"] = e.ref;
  if (!e.sets.empty()) j["sets"] = e.sets;
  if (!e.message.empty()) j["message"] = e.message;
}

void from_json(const json& j, Event& e) {
  e.type = j.at("type").get<std::string>();
  e.ref = j.value("ref", std::string());
  e.sets = j.value("sets", std::vector<std::vector<std::string>>{});
  e.message = j.value("message", std::string());
}

void to_json(json& j, const SessionConfig& c) {
  j = {{"participants", c.participants},
       {"mode", c.extensional ? "extensional" : "intensional"},
       {"policy", {{"most", c.policy.most}, {"small", c.policy.small}, {"verySmall", c.policy.very_small}}},
       {"targetPolicy", to_string(c.target_policy)},
       {"preference", to_string(c.preference)}};
  if (c.extensional) {
    j["elements"] = c.elements;
  } else {
    j["atoms"] = c.atoms;
    j["background"] = c.background;
  }
}

void from_json(const json& j, SessionConfig& c) {
  c.participants = j.at("participants").get<std::vector<Participant>>();
  c.atoms = j.value("atoms", std::vector<std::string>{});
  c.background = j.value("background", std::vector<std::string>{});
  c.elements = j.value("elements", std::vector<std::string>{});
  const std::string mode = j.value("mode", std::string(c.elements.empty() ? "intensional" : "extensional"));
  if (mode != "intensional" && mode != "extensional") throw ProtocolError("payload", "unknown mode '" + mode + "'");
  c.extensional = mode == "extensional";
  if (j.contains("policy")) {
    const json& p = j.at("policy");
    c.policy.most = p.value("most", c.policy.most);
    c.policy.small = p.value("small", c.policy.small);
    c.policy.very_small = p.value("verySmall", c.policy.very_small);
  }
  c.target_policy = target_policy_from_string(j.value("targetPolicy", std::string("max-frequency")));
  c.preference = variant_from_string(j.value("preference", std::string("subset")));
}

void to_json(json& j, const Verdict& v) {
  j = {{"outcome", to_string(v.outcome)}, {"surviving", v.surviving}};
  if (!v.deadlocked.empty()) j["deadlocked"] = v.deadlocked;
}

json state_to_json(const SessionState& s) {
  json status = json::object();
  for (const auto& [id, st] : s.status) {
    json e = {{"attacks", st.attacks},           {"defenses", st.defenses},
              {"confirmations", st.confirmations}, {"agreements", st.agreements},
              {"contested", st.contested},       {"defended", st.defended}};
    if (st.rule) e["rule"] = *st.rule;
    if (!st.surprise_marks.empty()) e["surpriseMarks"] = st.surprise_marks;
    if (const Move* m = s.find_move(id)) {
      // Negated-premise elaborations are attacked like facts.
      const MoveKind kind = m->kind == MoveKind::elaborate ? MoveKind::assert_fact : m->kind;
      json legal = json::array();
      for (auto c : legal_components(kind)) legal.push_back(to_string(c));
      e["legalComponents"] = std::move(legal);
    }
    status[id] = std::move(e);
  }
  json j = {{"phase", to_string(s.phase)},
            {"moves", s.moves},
            {"active", s.active_assertions()},
            {"retracted", std::vector<std::string>(s.retracted.begin(), s.retracted.end())},
            {"hanging", std::vector<std::string>(s.hanging.begin(), s.hanging.end())},
            {"status", std::move(status)},
            {"mis", s.report.mis},
            {"frequencies", s.report.frequencies}};
  j["proposal"] = nullptr;
  if (s.proposal) j["proposal"] = {{"move", s.proposal->move_id}, {"proposer", s.proposal->proposer}, {"votes", s.proposal->votes}};
  j["target"] = s.target ? json(*s.target) : json(nullptr);
  j["verdict"] = s.verdict ? json(*s.verdict) : json(nullptr);
  return j;
}

json hierarchy_to_json(const PreferentialModel& model) {
  const std::size_t n = model.theory.signature().size();
  const auto bitstrings = [n](const ModelSet& ms) {
    std::vector<std::string> out;
    ms.for_each([&](Valuation v) { out.push_back(to_bitstring(v, n)); });
    return out;
  };
  json cells = json::array();
  for (std::size_t i = 0; i < model.cells.size(); ++i) {
    const auto& part = model.partitions()[i];
    cells.push_back({{"code", model.cells[i].code_string()},
                     {"expression", cell_expression(model.cells[i], model.family)},
                     {"size", model.cells[i].carrier.count()},
                     {"valid", part.valid_ids},
                     {"mu", bitstrings(part.mu)},
                     {"o", bitstrings(part.o)}});
  }
  json hasse = json::array();
  for (const auto& [a, b] : model.hierarchy.hasse())
    hasse.push_back({model.cells[a].code_string(), model.cells[b].code_string()});
  json packets = json::array();
  for (const auto& [a, b] : model.packets().reduction)
    packets.push_back({packet_name(a, model.cells), packet_name(b, model.cells)});
  std::vector<std::string> members;
  for (const auto& m : model.family.members) members.push_back(m.label);
  return {{"atoms", model.theory.signature().atoms()},
          {"members", members},
          {"cells", std::move(cells)},
          {"hasse", std::move(hasse)},
          {"packets", std::move(packets)}};
}

std::string save_transcript(const SessionState& s) {
  std::ostringstream os;
  os << json{{"format", "defarg-transcript"}, {"version", kTranscriptVersion}}.dump() << '\n';
  os << json{{"config", s.config}}.dump() << '\n';
  for (const auto& h : s.history) {
    json line;
    if (h.verb == "move")
      line["move"] = *h.move;
    else
      line["close"] = true;
    line["events"] = h.events;
    os << line.dump() << '\n';
  }
  return os.str();
}

SessionState load_transcript(std::string_view text) {
  std::vector<std::string> lines;
  {
    std::istringstream is{std::string(text)};
    for (std::string l; std::getline(is, l);) lines.push_back(l);
  }
  while (!lines.empty() && lines.back().find_first_not_of(" \t\r") == std::string::npos) lines.pop_back();
  if (lines.size() < 2) throw TranscriptError(lines.size() + 1, "transcript is missing its header or configuration");

  const auto parse_line = [&](std::size_t idx) {
    try {
      return json::parse(lines[idx]);
    } catch (const json::exception& e) {
      throw TranscriptError(idx + 1, std::string("invalid JSON: ") + e.what());
    }
  };

  const json header = parse_line(0);
  if (!header.is_object() || header.value("format", std::string()) != "defarg-transcript")
    throw TranscriptError(1, "not a defarg transcript");
  if (header.value("version", -1) != kTranscriptVersion)
    throw TranscriptError(1, "unsupported transcript version " + header.value("version", json(nullptr)).dump());

  SessionState state;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const json line = parse_line(i);
    try {
      if (i == 1) {
        if (!line.contains("config")) throw TranscriptError(i + 1, "expected the session configuration");
        state = open_session(line.at("config").get<SessionConfig>());
        continue;
      }
      std::vector<Event> recorded = line.value("events", std::vector<Event>{});
      MoveResult r;
      if (line.contains("move"))
        r = submit_move(std::move(state), line.at("move").get<Move>());
      else if (line.value("close", false))
        r = close_session(std::move(state));
      else
        throw TranscriptError(i + 1, "expected a move or close record");
      if (r.events != recorded) throw TranscriptError(i + 1, "recorded events differ from the replay");
      state = std::move(r.state);
    } catch (const TranscriptError&) {
      throw;
    } catch (const json::exception& e) {
      throw TranscriptError(i + 1, e.what());
    } catch (const Error& e) {
      throw TranscriptError(i + 1, e.what());
    }
  }
  return state;
}

void write_transcript_file(const std::filesystem::path& path, const SessionState& state) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << save_transcript(state);
}

SessionState read_transcript_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_transcript(ss.str());
}

}  // namespace defarg
