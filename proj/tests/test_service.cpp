#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <thread>

#include <unistd.h>

#include <httplib.h>

#include "learnspace/sequence_space.hpp"
#include "learnspace/service.hpp"
#include "learnspace/space_io.hpp"

using namespace learnspace;
using nlohmann::json;

namespace {

std::string data(const std::string& name) {
  return read_text_file(std::string(LEARNSPACE_TEST_DATA) + "/" + name);
}

std::string make_space(SessionService& svc, const std::string& file, const std::string& format) {
  auto r = svc.create_space({{"format", format}, {"text", data(file)}});
  REQUIRE(r.status == 201);
  return r.body["id"].get<std::string>();
}

json noiseless() { return {{"beta", 0.0}, {"eta", 0.0}}; }

}  // namespace

TEST_CASE("spaces are summarized on creation") {
  SessionService svc;
  auto r = svc.create_space({{"format", "hasse"}, {"text", data("fig1.hasse")}});
  REQUIRE(r.status == 201);
  CHECK(r.body["schema_version"] == kSchemaVersion);
  CHECK(r.body["id"] == "space-1");
  CHECK(r.body["state_count"] == 19);
  CHECK(r.body["dim_c"] == 2);
  CHECK(r.body["n"] == 8);
  CHECK(svc.get_space("space-1").body == r.body);
  CHECK(svc.get_space("space-9").status == 404);
  CHECK(svc.list_spaces().body["spaces"].size() == 1);

  CHECK(svc.create_space({{"format", "hasse"}}).status == 400);
  CHECK(svc.create_space({{"format", "xml"}, {"text", "domain: A"}}).status == 400);
  CHECK(svc.create_space({{"format", "hasse"}, {"text", "domain: A\nedge A\n"}}).status == 400);
  CHECK(svc.create_space(json::array()).status == 400);
}

TEST_CASE("spaces over the state limit are refused with 422") {
  SessionService svc(ServiceOptions{.max_states = 10});
  auto r = svc.create_space({{"format", "hasse"}, {"text", data("fig1.hasse")}});
  CHECK(r.status == 422);
  CHECK(r.body.contains("error"));
  CHECK(svc.create_space({{"format", "seqs"}, {"text", data("fig4.seqs")}}).status == 201);
}

TEST_CASE("a session on the three-concept space asks B first") {
  SessionService svc;
  const auto space = make_space(svc, "fig4.seqs", "seqs");
  auto s = svc.create_session({{"space_id", space}});
  REQUIRE(s.status == 201);
  CHECK(s.body["status"] == "active");
  CHECK(s.body["question"] == "B");
  CHECK(s.body["questions_asked"] == 0);
  CHECK(s.body["final"].is_null());
  CHECK(s.body["marginals"].size() == 3);
  CHECK(s.body["marginals"][0]["p"].get<double>() == doctest::Approx(4.0 / 7.0));

  const auto id = s.body["session_id"].get<std::string>();
  CHECK(svc.answer(id, {{"concept", "A"}, {"correct", true}}).status == 409);
  CHECK(svc.answer(id, {{"concept", "Z"}, {"correct", true}}).status == 400);
  CHECK(svc.answer(id, {{"concept", "B"}}).status == 400);
  CHECK(svc.answer(id, {{"concept", "B"}, {"correct", 1}}).status == 400);
  CHECK(svc.answer("session-99", {{"concept", "B"}, {"correct", true}}).status == 404);

  auto a = svc.answer(id, {{"concept", "B"}, {"correct", true}});
  REQUIRE(a.status == 200);
  CHECK(a.body["questions_asked"] == 1);
  CHECK(a.body["marginals"][1]["asked"] == true);

  auto g = svc.get_session(id);
  CHECK(g.body["responses"].size() == 1);
  CHECK(g.body.contains("transcript"));

  CHECK(svc.create_session({{"space_id", "space-7"}}).status == 404);
  CHECK(svc.create_session({{"space_id", space}, {"config", json::object({{"beta", 0.6}})}}).status == 400);
  CHECK(svc.create_session({{"space_id", space}, {"config", json::object({{"seed", -1}})}}).status == 400);
  CHECK(svc.create_session({{"space", space}}).status == 400);

  CHECK(svc.delete_session(id).status == 200);
  CHECK(svc.get_session(id).status == 404);
  CHECK(svc.delete_session(id).status == 404);
}

TEST_CASE("noiseless sessions recover every state") {
  for (const auto* file : {"fig4.seqs", "fig5.seqs"}) {
    CAPTURE(file);
    SessionService svc;
    const auto space = make_space(svc, file, "seqs");
    const auto sp = parse_seqs(data(file));
    const auto& d = sp.domain();
    for (const auto& truth : sequence_family(sp)) {
      auto r = svc.create_session({{"space_id", space}, {"config", noiseless()}});
      REQUIRE(r.status == 201);
      const auto id = r.body["session_id"].get<std::string>();
      while (r.body["status"] == "active") {
        const auto q = r.body["question"].get<std::string>();
        r = svc.answer(id, {{"concept", q}, {"correct", truth.test(*d.find(q))}});
        REQUIRE(r.status == 200);
      }
      CHECK(r.body["questions_asked"].get<std::size_t>() <= sp.n());
      json expected = json::array();
      truth.for_each([&](ConceptId c) { expected.push_back(d.label(c)); });
      CHECK(r.body["final"]["state"] == expected);
      CHECK(svc.answer(id, {{"concept", d.label(0)}, {"correct", true}}).status == 409);
    }
  }
}

TEST_CASE("the fringes of the final state are reported") {
  SessionService svc;
  const auto space = make_space(svc, "fig4.seqs", "seqs");
  auto r = svc.create_session({{"space_id", space}, {"config", noiseless()}});
  const auto id = r.body["session_id"].get<std::string>();
  const std::set<std::string> known{"A"};
  while (r.body["status"] == "active") {
    const auto q = r.body["question"].get<std::string>();
    r = svc.answer(id, {{"concept", q}, {"correct", known.count(q) == 1}});
  }
  CHECK(r.body["final"]["state"] == json{"A"});
  CHECK(r.body["final"]["recently_learned"] == json{"A"});
  CHECK(r.body["final"]["ready_to_learn"] == json{"B", "C"});
}

TEST_CASE("identical inputs give identical responses") {
  auto replay = [] {
    SessionService svc;
    const auto space = make_space(svc, "fig5.seqs", "seqs");
    std::vector<std::string> bodies;
    auto r = svc.create_session({{"space_id", space}, {"config", json::object({{"seed", 11}})}});
    bodies.push_back(r.body.dump());
    const auto id = r.body["session_id"].get<std::string>();
    bool flip = false;
    while (r.body["status"] == "active") {
      flip = !flip;
      r = svc.answer(id, {{"concept", r.body["question"]}, {"correct", flip}});
      REQUIRE(r.status == 200);
      bodies.push_back(r.body.dump());
    }
    bodies.push_back(svc.get_session(id).body.dump());
    return bodies;
  };
  CHECK(replay() == replay());
}

TEST_CASE("http endpoints") {
  const auto log_path =
      std::filesystem::temp_directory_path() / ("learnspace_service_" + std::to_string(::getpid()) + ".jsonl");
  std::filesystem::remove(log_path);
  {
    SessionService svc(ServiceOptions{.persist_path = log_path.string()});
    httplib::Server server;
    install_routes(server, svc);
    const int port = server.bind_to_any_port("127.0.0.1");
    REQUIRE(port > 0);
    std::thread worker([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    httplib::Client client("127.0.0.1", port);
    auto post = [&](const std::string& path, const json& body) {
      auto res = client.Post(path, body.dump(), "application/json");
      REQUIRE(res);
      return std::make_pair(res->status, json::parse(res->body));
    };

    auto [st, space] = post("/spaces", {{"format", "seqs"}, {"text", data("fig4.seqs")}});
    CHECK(st == 201);
    auto listed = client.Get("/spaces");
    REQUIRE(listed);
    CHECK(json::parse(listed->body)["spaces"].size() == 1);
    CHECK(client.Get("/spaces/" + space["id"].get<std::string>())->status == 200);
    CHECK(client.Get("/spaces/nope")->status == 404);

    auto bad = client.Post("/sessions", "{not json", "application/json");
    REQUIRE(bad);
    CHECK(bad->status == 400);

    auto [st2, session] = post("/sessions", {{"space_id", space["id"]}});
    CHECK(st2 == 201);
    const auto id = session["session_id"].get<std::string>();
    const json answer{{"concept", session["question"]}, {"correct", true}};

    // Two simultaneous answers to the same question: exactly one is accepted.
    int statuses[2] = {0, 0};
    std::thread t0([&] {
      httplib::Client c("127.0.0.1", port);
      statuses[0] = c.Post("/sessions/" + id + "/answer", answer.dump(), "application/json")->status;
    });
    std::thread t1([&] {
      httplib::Client c("127.0.0.1", port);
      statuses[1] = c.Post("/sessions/" + id + "/answer", answer.dump(), "application/json")->status;
    });
    t0.join();
    t1.join();
    CHECK(std::min(statuses[0], statuses[1]) == 200);
    CHECK(std::max(statuses[0], statuses[1]) == 409);

    auto got = client.Get("/sessions/" + id);
    REQUIRE(got);
    CHECK(json::parse(got->body)["questions_asked"] == 1);
    CHECK(client.Delete("/sessions/" + id)->status == 200);
    CHECK(client.Get("/sessions/" + id)->status == 404);

    server.stop();
    worker.join();
  }
  std::ifstream in(log_path);
  std::vector<std::string> events;
  for (std::string line; std::getline(in, line);) events.push_back(json::parse(line)["event"].get<std::string>());
  CHECK(events == std::vector<std::string>{"space_created", "session_created", "answer", "session_deleted"});
  std::filesystem::remove(log_path);
}
