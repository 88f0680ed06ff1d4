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

#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "json.hpp"

#include "defarg/protocol.hpp"

namespace httplib {
class Server;
}

namespace defarg {

/// In-memory session store shared by the stdio loop and the HTTP routes.
/// Each session is guarded by its own mutex.
class SessionService {
 public:
  struct Response {
    int status = 200;
    nlohmann::json body;
  };

  /// Body: {"config": {...}} with optional "seed" (theory text) and "seedAuthor".
  Response open(const nlohmann::json& request);
  Response move(const std::string& session, const nlohmann::json& move);
  Response state(const std::string& session);
  Response hierarchy(const std::string& session);
  /// Body is {"transcript": "<ndjson text>"}.
  Response transcript(const std::string& session);
  Response close(const std::string& session);

  /// One stdio request: {"op": "open"|"move"|"state"|"hierarchy"|"transcript"|"close", ...}.
  nlohmann::json handle(const nlohmann::json& request);
  /// Reads one JSON request per line until EOF, writing one response per line.
  void run_stdio(std::istream& in, std::ostream& out);

 private:
  struct Entry {
    std::mutex mutex;
    SessionState state;
  };
  std::shared_ptr<Entry> find(const std::string& session);

  std::mutex sessions_mutex_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
  std::size_t next_id_ = 1;
};

void install_routes(httplib::Server& server, SessionService& service);

}  // namespace defarg
