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

#include "doctest.h"

#include <sstream>
#include <thread>

#include "httplib.h"

#include "defarg/service.hpp"

using namespace defarg;
using nlohmann::json;

namespace {

json symmetrical_open() {
  return {{"config",
           {{"participants", {{{"id", "arb"}, {"role", "arbiter"}}, {{"id", "ann"}}, {{"id", "bob"}}}},
            {"mode", "extensional"},
            {"elements", {"x", "a", "b", "c"}}}}};
}

json fact(const char* author, const char* content, const char* id) {
  return {{"author", author}, {"kind", "AssertFact"}, {"content", content}, {"id", id}};
}

}  // namespace

TEST_CASE("service session lifecycle") {
  SessionService svc;
  const auto opened = svc.open(symmetrical_open());
  REQUIRE(opened.status == 201);
  const std::string id = opened.body.at("session");
  CHECK(opened.body.at("state").at("phase") == "open");
  CHECK(opened.body.at("state").at("moves").empty());

  CHECK(svc.move(id, fact("ann", "{x, a}", "A")).status == 200);
  CHECK(svc.move(id, fact("bob", "{x, b}", "B")).status == 200);
  CHECK(svc.move(id, fact("ann", "{x, c}", "C")).status == 200);
  const auto y = svc.move(id, fact("bob", "{a, b, c}", "Y"));
  REQUIRE(y.status == 200);
  CHECK(y.body.at("events").at(0).at("type") == "culprits");
  const json& state = y.body.at("state");
  CHECK(state.at("phase") == "retraction-vote");
  CHECK(state.at("mis").size() == 3);
  CHECK(state.at("frequencies").at("Y") == 3);
  CHECK(state.at("status").at("Y").at("legalComponents") == json::array({"conclusion"}));

  const auto rejected = svc.move(id, fact("ann", "{x}", "Z"));
  CHECK(rejected.status == 409);
  CHECK(rejected.body.at("error").at("code") == "phase");

  const auto t = svc.transcript(id);
  REQUIRE(t.status == 200);
  CHECK(t.body.at("transcript").get<std::string>().find("defarg-transcript") != std::string::npos);

  const auto closed = svc.close(id);
  CHECK(closed.body.at("state").at("verdict").at("outcome") == "closed-by-agreement");
  CHECK(svc.state("nope").status == 404);
  CHECK(svc.move(id, json::object()).status == 400);
}

TEST_CASE("service hierarchy view") {
  SessionService svc;
  const json open = {{"config", {{"participants", {{{"id", "arb"}, {"role", "arbiter"}}, {{"id", "ann"}}}}, {"atoms", json::array()}}},
                     {"seed", "atoms: b p f\nbackground: p -> b\nd1: b ~> f\nd2: p ~> ~f\n"},
                     {"seedAuthor", "ann"}};
  const auto opened = svc.open(open);
  REQUIRE(opened.status == 201);
  const auto h = svc.hierarchy(opened.body.at("session"));
  REQUIRE(h.status == 200);
  CHECK(h.body.at("cells").size() == 3);
  CHECK(h.body.at("hasse").size() == 2);
  CHECK(h.body.at("packets").size() == 4);
  CHECK(h.body.at("cells").at(1).at("mu") == json::array({"101"}));

  const auto ext = svc.open(symmetrical_open());
  CHECK(svc.hierarchy(ext.body.at("session")).status == 422);
  CHECK(svc.open({{"config", {{"participants", json::array()}}}}).status == 422);
  CHECK(svc.open(json::object()).status == 400);
}

TEST_CASE("stdio loop") {
  SessionService svc;
  std::istringstream in(json{{"op", "open"}, {"config", symmetrical_open().at("config")}, {"id", 7}}.dump() + "\n" +
                        "not json\n\n" + R"({"op":"move","session":"s1","move":{"author":"ann","kind":"AssertFact","content":"{x}"}})" +
                        "\n" + R"({"op":"state","session":"s1"})" + "\n" + R"({"op":"dance"})" + "\n" +
                        R"({"op":"move","session":"s1"})" + "\n");
  std::ostringstream out;
  svc.run_stdio(in, out);
  std::istringstream lines(out.str());
  std::vector<json> replies;
  for (std::string l; std::getline(lines, l);) replies.push_back(json::parse(l));
  REQUIRE(replies.size() == 6);
  CHECK(replies[0].at("ok") == true);
  CHECK(replies[0].at("id") == 7);
  CHECK(replies[1].at("ok") == false);
  CHECK(replies[2].at("result").at("move").at("id") == "m1");
  CHECK(replies[3].at("result").at("active") == json::array({"m1"}));
  CHECK(replies[4].at("error").at("code") == "bad-request");
  CHECK(replies[5].at("status") == 400);
}

TEST_CASE("moves on one session are serialized") {
  SessionService svc;
  const std::string id = svc.open(symmetrical_open()).body.at("session");
  std::vector<std::thread> threads;
  for (int t = 0; t < 4; ++t) {
    threads.emplace_back([&svc, &id] {
      for (int i = 0; i < 4; ++i)
        svc.move(id, {{"author", "ann"}, {"kind", "AssertFact"}, {"content", "{x, a}"}});
    });
  }
  for (auto& t : threads) t.join();
  const auto state = svc.state(id).body;
  CHECK(state.at("moves").size() == 16);
  std::set<std::string> ids;
  for (const auto& m : state.at("moves")) ids.insert(m.at("id").get<std::string>());
  CHECK(ids.size() == 16);
  // The analyzer's unit cap is reached.
  const auto over = svc.move(id, {{"author", "ann"}, {"kind", "AssertFact"}, {"content", "{x}"}});
  CHECK(over.status == 422);
  CHECK(over.body.at("error").at("code") == "limit");
}

TEST_CASE("http routes") {
  SessionService svc;
  httplib::Server server;
  install_routes(server, svc);
  const int port = server.bind_to_any_port("127.0.0.1");
  REQUIRE(port > 0);
  std::thread runner([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  httplib::Client client("127.0.0.1", port);
  auto res = client.Post("/session", symmetrical_open().dump(), "application/json");
  REQUIRE(res);
  CHECK(res->status == 201);
  const std::string id = json::parse(res->body).at("session");

  for (auto m : {fact("ann", "{x, a}", "A"), fact("bob", "{x, b}", "B"), fact("ann", "{x, c}", "C"),
                 fact("bob", "{a, b, c}", "Y")}) {
    res = client.Post("/session/" + id + "/move", m.dump(), "application/json");
    REQUIRE(res);
    CHECK(res->status == 200);
  }
  res = client.Get("/session/" + id + "/state");
  REQUIRE(res);
  CHECK(json::parse(res->body).at("mis").size() == 3);

  res = client.Post("/session/" + id + "/move",
                    json{{"author", "bob"}, {"kind", "Attack"}, {"attack", {{"target", "A"}, {"component", "rule-itself"}}}}.dump(),
                    "application/json");
  REQUIRE(res);
  CHECK(res->status == 409);

  res = client.Get("/session/" + id + "/transcript");
  REQUIRE(res);
  CHECK(res->status == 200);
  CHECK(res->get_header_value("Content-Type") == "application/x-ndjson");
  CHECK(std::count(res->body.begin(), res->body.end(), '\n') == 6);

  res = client.Get("/session/" + id + "/hierarchy");
  REQUIRE(res);
  CHECK(res->status == 422);
  res = client.Get("/session/unknown/state");
  REQUIRE(res);
  CHECK(res->status == 404);
  res = client.Post("/session", "{", "application/json");
  REQUIRE(res);
  CHECK(res->status == 400);
  res = client.Post("/session/" + id + "/close", "", "application/json");
  REQUIRE(res);
  CHECK(json::parse(res->body).at("state").at("phase") == "closed");

  server.stop();
  runner.join();
}
