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

#include "defarg/service.hpp"

#include <istream>
#include <ostream>

#include "httplib.h"

#include "defarg/theory_format.hpp"
#include "defarg/transcript.hpp"

namespace defarg {

using nlohmann::json;

namespace {

class NotFound : public Error {
 public:
  using Error::Error;
};

SessionService::Response error_response(int status, const std::string& code, const std::string& message) {
  return {status, {{"error", {{"code", code}, {"message", message}}}}};
}

int status_for(const std::string& code) {
  if (code == "phase") return 409;
  if (code == "reference") return 404;
  return 422;
}

template <typename F>
SessionService::Response guarded(F&& f) {
  try {
    return f();
  } catch (const NotFound& e) {
    return error_response(404, "not-found", e.what());
  } catch (const ProtocolError& e) {
    return error_response(status_for(e.code()), e.code(), e.what());
  } catch (const json::exception& e) {
    return error_response(400, "bad-request", e.what());
  } catch (const Error& e) {
    return error_response(422, "payload", e.what());
  }
}

PreferenceConfig preference_for(const SessionState& s, const DefaultTheory& theory) {
  PreferenceConfig config;
  config.variant = s.config.preference;
  // Priority follows assertion order.
  if (config.variant == PreferenceVariant::priority)
    for (const auto& d : theory.defaults()) config.priority.push_back(d.id);
  return config;
}

}  // namespace

std::shared_ptr<SessionService::Entry> SessionService::find(const std::string& session) {
  std::lock_guard lock(sessions_mutex_);
  const auto it = sessions_.find(session);
  if (it == sessions_.end()) throw NotFound("unknown session '" + session + "'");
  return it->second;
}

SessionService::Response SessionService::open(const json& request) {
  return guarded([&]() -> Response {
    const SessionConfig config = request.at("config").get<SessionConfig>();
    auto entry = std::make_shared<Entry>();
    if (request.contains("seed")) {
      const std::string author = request.value("seedAuthor", std::string());
      entry->state = open_session(config, parse_theory(request.at("seed").get<std::string>()), author);
    } else {
      entry->state = open_session(config);
    }
    json state = state_to_json(entry->state);
    std::string id;
    {
      std::lock_guard lock(sessions_mutex_);
      id = "s" + std::to_string(next_id_++);
      sessions_[id] = std::move(entry);
    }
    return {201, {{"session", id}, {"state", std::move(state)}}};
  });
}

SessionService::Response SessionService::move(const std::string& session, const json& move) {
  return guarded([&]() -> Response {
    auto entry = find(session);
    std::lock_guard lock(entry->mutex);
    MoveResult r = submit_move(entry->state, move.get<Move>());
    entry->state = std::move(r.state);
    return {200, {{"move", entry->state.moves.back()}, {"events", r.events}, {"state", state_to_json(entry->state)}}};
  });
}

SessionService::Response SessionService::state(const std::string& session) {
  return guarded([&]() -> Response {
    auto entry = find(session);
    std::lock_guard lock(entry->mutex);
    return {200, state_to_json(entry->state)};
  });
}

SessionService::Response SessionService::hierarchy(const std::string& session) {
  return guarded([&]() -> Response {
    auto entry = find(session);
    std::lock_guard lock(entry->mutex);
    const DefaultTheory theory = session_theory(entry->state);
    return {200, hierarchy_to_json(build_preferential_model(theory, preference_for(entry->state, theory)))};
  });
}

SessionService::Response SessionService::transcript(const std::string& session) {
  return guarded([&]() -> Response {
    auto entry = find(session);
    std::lock_guard lock(entry->mutex);
    return {200, {{"transcript", save_transcript(entry->state)}}};
  });
}

SessionService::Response SessionService::close(const std::string& session) {
  return guarded([&]() -> Response {
    auto entry = find(session);
    std::lock_guard lock(entry->mutex);
    MoveResult r = close_session(entry->state);
    entry->state = std::move(r.state);
    return {200, {{"events", r.events}, {"state", state_to_json(entry->state)}}};
  });
}

json SessionService::handle(const json& request) {
  Response r;
  if (!request.is_object() || !request.contains("op")) {
    r = error_response(400, "bad-request", "request needs an 'op'");
  } else {
    const std::string op = request.value("op", std::string());
    const std::string session = request.value("session", std::string());
    if (op == "open")
      r = open(request);
    else if (op == "move")
      r = request.contains("move") ? move(session, request.at("move"))
                                   : error_response(400, "bad-request", "move request needs a 'move'");
    else if (op == "state")
      r = state(session);
    else if (op == "hierarchy")
      r = hierarchy(session);
    else if (op == "transcript")
      r = transcript(session);
    else if (op == "close")
      r = close(session);
    else
      r = error_response(400, "bad-request", "unknown op '" + op + "'");
  }
  json out = {{"ok", r.status < 400}, {"status", r.status}};
  if (request.is_object() && request.contains("id")) out["id"] = request.at("id");
  if (r.status < 400)
    out["result"] = std::move(r.body);
  else
    out["error"] = std::move(r.body.at("error"));
  return out;
}

void SessionService::run_stdio(std::istream& in, std::ostream& out) {
  for (std::string line; std::getline(in, line);) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json request;
    try {
      request = json::parse(line);
    } catch (const json::exception& e) {
      out << json{{"ok", false}, {"status", 400}, {"error", {{"code", "bad-request"}, {"message", e.what()}}}}.dump()
          << std::endl;
      continue;
    }
    out << handle(request).dump() << std::endl;
  }
}

void install_routes(httplib::Server& server, SessionService& service) {
  const auto reply = [](httplib::Response& res, const SessionService::Response& r) {
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
  };
  const auto parse_body = [](const httplib::Request& req, json& body) {
    try {
      body = json::parse(req.body);
      return true;
    } catch (const json::exception&) {
      return false;
    }
  };
  const auto bad_body = [reply](httplib::Response& res) {
    reply(res, error_response(400, "bad-request", "request body is not JSON"));
  };

  server.Post("/session", [&service, reply, parse_body, bad_body](const httplib::Request& req, httplib::Response& res) {
    json body;
    if (!parse_body(req, body)) return bad_body(res);
    reply(res, service.open(body));
  });
  server.Post(R"(/session/([^/]+)/move)",
              [&service, reply, parse_body, bad_body](const httplib::Request& req, httplib::Response& res) {
                json body;
                if (!parse_body(req, body)) return bad_body(res);
                reply(res, service.move(req.matches[1], body));
              });
  server.Post(R"(/session/([^/]+)/close)", [&service, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, service.close(req.matches[1]));
  });
  server.Get(R"(/session/([^/]+)/state)", [&service, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, service.state(req.matches[1]));
  });
  server.Get(R"(/session/([^/]+)/hierarchy)", [&service, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, service.hierarchy(req.matches[1]));
  });
  server.Get(R"(/session/([^/]+)/transcript)", [&service](const httplib::Request& req, httplib::Response& res) {
    const auto r = service.transcript(req.matches[1]);
    res.status = r.status;
    if (r.status == 200)
      res.set_content(r.body.at("transcript").get<std::string>(), "application/x-ndjson");
    else
      res.set_content(r.body.dump(), "application/json");
  });
}

}  // namespace defarg
