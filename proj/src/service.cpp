#include "learnspace/service.hpp"

#include <fstream>
#include <map>
#include <mutex>
#include <shared_mutex>

#include <httplib.h>

#include "learnspace/assessment.hpp"
#include "learnspace/space_io.hpp"

namespace learnspace {

using nlohmann::json;

namespace {

Reply error(int status, const std::string& message) {
  return {status, json{{"schema_version", kSchemaVersion}, {"error", message}}};
}

json labels_of(const Domain& d, const State& s) {
  json out = json::array();
  s.for_each([&](ConceptId c) { out.push_back(d.label(c)); });
  return out;
}

struct Space {
  std::string id;
  SpaceFormat format;
  SequenceSpace seqs;
  std::uint64_t state_count = 0;
  std::size_t dim_c = 0;

  json view() const {
    return {{"schema_version", kSchemaVersion}, {"id", id},
            {"format", format_name(format)},   {"n", seqs.n()},
            {"concepts", seqs.domain().labels()}, {"state_count", state_count},
            {"dim_c", dim_c},                  {"sequences", seqs.k()}};
  }
};

// Reads an optional field of the given JSON type, throwing ValidationError on a type mismatch.
template <typename T>
T field(const json& obj, const char* key, T fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if constexpr (std::is_same_v<T, double>) {
    if (!v.is_number()) throw ValidationError(std::string("'") + key + "' must be a number");
  } else if constexpr (std::is_integral_v<T>) {
    if (!v.is_number_integer() || v.get<std::int64_t>() < 0)
      throw ValidationError(std::string("'") + key + "' must be a non-negative integer");
  }
  return v.get<T>();
}

AssessmentConfig parse_config(const json& body) {
  AssessmentConfig cfg;
  if (!body.contains("config")) return cfg;
  const auto& c = body.at("config");
  if (!c.is_object()) throw ValidationError("'config' must be an object");
  cfg.model.beta = field(c, "beta", cfg.model.beta);
  cfg.model.eta = field(c, "eta", cfg.model.eta);
  cfg.theta_lo = field(c, "theta_lo", cfg.theta_lo);
  cfg.theta_hi = field(c, "theta_hi", cfg.theta_hi);
  cfg.collection_size = field<std::size_t>(c, "collection_size", cfg.collection_size);
  cfg.seed = field<std::uint64_t>(c, "seed", cfg.seed);
  cfg.validate();
  return cfg;
}

json config_json(const AssessmentConfig& c) {
  return {{"beta", c.model.beta},     {"eta", c.model.eta},
          {"theta_lo", c.theta_lo},   {"theta_hi", c.theta_hi},
          {"collection_size", c.collection_size}, {"seed", c.seed}};
}

struct Session {
  std::string id;
  std::string space_id;
  ProjectionAssessment run;
  mutable std::mutex mu;

  Session(std::string id_, std::string space_id_, const SequenceSpace& sp, const AssessmentConfig& cfg)
      : id(std::move(id_)), space_id(std::move(space_id_)), run(sp, cfg) {}

  // Caller holds mu.
  json view(bool with_transcript) const {
    const auto& sp = run.space();
    const auto& d = sp.domain();
    const auto& cfg = run.config();
    json marginals = json::array();
    const auto& p = run.marginals();
    for (std::size_t c = 0; c < p.size(); ++c) {
      const auto x = static_cast<ConceptId>(c);
      marginals.push_back({{"concept", d.label(x)},
                           {"p", p[c]},
                           {"asked", run.log().asked().test(x)},
                           {"settled", p[c] <= cfg.theta_lo || p[c] >= cfg.theta_hi}});
    }
    json out{{"schema_version", kSchemaVersion},
             {"session_id", id},
             {"space_id", space_id},
             {"status", run.finished() ? "done" : "active"},
             {"question", run.pending() ? json(d.label(*run.pending())) : json(nullptr)},
             {"questions_asked", run.log().size()},
             {"marginals", std::move(marginals)},
             {"config", config_json(cfg)},
             {"hit_question_cap", run.hit_question_cap()},
             {"final", nullptr}};
    if (run.finished()) {
      const auto& s = run.final_state();
      const auto f = fringes(sp, s);
      out["final"] = {{"state", labels_of(d, s)},
                      {"ready_to_learn", labels_of(d, f.outer)},
                      {"recently_learned", labels_of(d, f.inner)}};
    }
    if (with_transcript) {
      json responses = json::array();
      for (const auto& r : run.log().entries())
        responses.push_back({{"concept", d.label(r.item)}, {"correct", r.correct}});
      out["responses"] = std::move(responses);
      out["transcript"] = run.transcript();
    }
    return out;
  }
};

}  // namespace

struct SessionService::Impl {
  ServiceOptions opts;
  mutable std::shared_mutex spaces_mu, sessions_mu;
  std::map<std::string, std::shared_ptr<const Space>> spaces;
  std::map<std::string, std::shared_ptr<Session>> sessions;
  std::uint64_t next_space = 1, next_session = 1;  // guarded by the matching map lock
  std::mutex log_mu;
  std::ofstream log;

  void persist(const json& event) {
    if (!log.is_open()) return;
    std::lock_guard lock(log_mu);
    log << event.dump() << '\n';
    log.flush();
  }

  std::shared_ptr<const Space> space(const std::string& id) const {
    std::shared_lock lock(spaces_mu);
    auto it = spaces.find(id);
    return it == spaces.end() ? nullptr : it->second;
  }

  std::shared_ptr<Session> session(const std::string& id) const {
    std::shared_lock lock(sessions_mu);
    auto it = sessions.find(id);
    return it == sessions.end() ? nullptr : it->second;
  }
};

SessionService::SessionService(ServiceOptions opts) : impl_(std::make_unique<Impl>()) {
  impl_->opts = std::move(opts);
  if (!impl_->opts.persist_path.empty()) {
    impl_->log.open(impl_->opts.persist_path, std::ios::app);
    if (!impl_->log) throw ValidationError("cannot open '" + impl_->opts.persist_path + "' for appending");
  }
}

SessionService::~SessionService() = default;

Reply SessionService::create_space(const json& body) {
  if (!body.is_object() || !body.contains("format") || !body.contains("text") || !body["format"].is_string() ||
      !body["text"].is_string())
    return error(400, "expected {\"format\": \"hasse|seqs|states\", \"text\": \"...\"}");
  auto entry = std::make_shared<Space>();
  try {
    const auto format = parse_format_name(body["format"].get<std::string>());
    const auto text = body["text"].get<std::string>();
    auto loaded = parse_space(format, text);
    entry->format = format;
    entry->state_count = count_states(loaded, impl_->opts.max_states);
    entry->seqs = loaded.sequences();
    entry->dim_c = minimize(entry->seqs).dim_c();
    if (entry->seqs.n() == 0) return error(400, "the space has no concepts");
  } catch (const CapacityError& e) {
    return error(422, e.what());
  } catch (const Error& e) {
    return error(400, e.what());
  }
  {
    std::unique_lock lock(impl_->spaces_mu);
    entry->id = "space-" + std::to_string(impl_->next_space++);
    impl_->spaces.emplace(entry->id, entry);
  }
  impl_->persist({{"event", "space_created"},
                  {"space_id", entry->id},
                  {"format", body["format"]},
                  {"text", body["text"]}});
  return {201, entry->view()};
}

Reply SessionService::list_spaces() const {
  json items = json::array();
  std::shared_lock lock(impl_->spaces_mu);
  for (const auto& [id, sp] : impl_->spaces) items.push_back(sp->view());
  return {200, json{{"schema_version", kSchemaVersion}, {"spaces", std::move(items)}}};
}

Reply SessionService::get_space(const std::string& id) const {
  auto sp = impl_->space(id);
  if (!sp) return error(404, "no space '" + id + "'");
  return {200, sp->view()};
}

Reply SessionService::create_session(const json& body) {
  if (!body.is_object() || !body.contains("space_id") || !body["space_id"].is_string())
    return error(400, "expected {\"space_id\": \"...\", \"config\": {...}}");
  const auto space_id = body["space_id"].get<std::string>();
  AssessmentConfig cfg;
  try {
    cfg = parse_config(body);
  } catch (const Error& e) {
    return error(400, e.what());
  }
  auto sp = impl_->space(space_id);
  if (!sp) return error(404, "no space '" + space_id + "'");

  std::string id;
  {
    std::unique_lock lock(impl_->sessions_mu);
    id = "session-" + std::to_string(impl_->next_session++);
  }
  auto session = std::make_shared<Session>(id, space_id, sp->seqs, cfg);
  json view;
  {
    std::lock_guard lock(session->mu);
    session->run.next_question();
    view = session->view(false);
  }
  {
    std::unique_lock lock(impl_->sessions_mu);
    impl_->sessions.emplace(id, session);
  }
  impl_->persist({{"event", "session_created"}, {"session_id", id}, {"space_id", space_id}, {"config", config_json(cfg)}});
  return {201, std::move(view)};
}

Reply SessionService::answer(const std::string& session_id, const json& body) {
  auto session = impl_->session(session_id);
  if (!session) return error(404, "no session '" + session_id + "'");
  if (!body.is_object() || !body.contains("concept") || !body["concept"].is_string() || !body.contains("correct") ||
      !body["correct"].is_boolean())
    return error(400, "expected {\"concept\": \"...\", \"correct\": true|false}");
  const auto label = body["concept"].get<std::string>();
  const bool correct = body["correct"].get<bool>();

  std::lock_guard lock(session->mu);
  auto& run = session->run;
  const auto item = run.space().domain().find(label);
  if (!item) return error(400, "unknown concept '" + label + "'");
  if (run.finished()) return error(409, "the session is finished");
  if (!run.pending() || *run.pending() != *item)
    return error(409, "'" + label + "' is not the current question");
  run.answer(*item, correct);
  try {
    run.next_question();
  } catch (const NumericalError& e) {
    // Only possible with zero error rates and contradictory answers.
    return error(422, e.what());
  }
  impl_->persist({{"event", "answer"}, {"session_id", session_id}, {"concept", label}, {"correct", correct}});
  if (run.finished())
    impl_->persist({{"event", "finished"},
                    {"session_id", session_id},
                    {"final", labels_of(run.space().domain(), run.final_state())},
                    {"transcript", run.transcript()}});
  return {200, session->view(false)};
}

Reply SessionService::get_session(const std::string& session_id) const {
  auto session = impl_->session(session_id);
  if (!session) return error(404, "no session '" + session_id + "'");
  std::lock_guard lock(session->mu);
  return {200, session->view(true)};
}

Reply SessionService::delete_session(const std::string& session_id) {
  {
    std::unique_lock lock(impl_->sessions_mu);
    if (impl_->sessions.erase(session_id) == 0) return error(404, "no session '" + session_id + "'");
  }
  impl_->persist({{"event", "session_deleted"}, {"session_id", session_id}});
  return {200, json{{"schema_version", kSchemaVersion}, {"deleted", session_id}}};
}

// ---------------------------------------------------------------------------

namespace {

void send(httplib::Response& res, const Reply& r) {
  res.status = r.status;
  res.set_content(r.body.dump() + "\n", "application/json");
}

// Parses the request body, answering 400 itself when it is not JSON.
template <typename F>
void with_body(const httplib::Request& req, httplib::Response& res, F&& f) {
  auto body = json::parse(req.body, nullptr, false);
  if (body.is_discarded()) return send(res, error(400, "request body is not valid JSON"));
  send(res, f(body));
}

}  // namespace

void install_routes(httplib::Server& server, SessionService& service, const std::string& static_dir) {
  server.Post("/spaces", [&](const httplib::Request& req, httplib::Response& res) {
    with_body(req, res, [&](const json& b) { return service.create_space(b); });
  });
  server.Get("/spaces", [&](const httplib::Request&, httplib::Response& res) { send(res, service.list_spaces()); });
  server.Get(R"(/spaces/([^/]+))", [&](const httplib::Request& req, httplib::Response& res) {
    send(res, service.get_space(req.matches[1]));
  });
  server.Post("/sessions", [&](const httplib::Request& req, httplib::Response& res) {
    with_body(req, res, [&](const json& b) { return service.create_session(b); });
  });
  server.Post(R"(/sessions/([^/]+)/answer)", [&](const httplib::Request& req, httplib::Response& res) {
    const std::string id = req.matches[1];
    with_body(req, res, [&](const json& b) { return service.answer(id, b); });
  });
  server.Get(R"(/sessions/([^/]+))", [&](const httplib::Request& req, httplib::Response& res) {
    send(res, service.get_session(req.matches[1]));
  });
  server.Delete(R"(/sessions/([^/]+))", [&](const httplib::Request& req, httplib::Response& res) {
    send(res, service.delete_session(req.matches[1]));
  });
  server.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
    std::string what = "internal error";
    try {
      std::rethrow_exception(ep);
    } catch (const std::exception& e) {
      what = e.what();
    } catch (...) {
    }
    send(res, error(500, what));
  });
  if (!static_dir.empty() && !server.set_mount_point("/", static_dir))
    throw ValidationError("static directory '" + static_dir + "' does not exist");
}

}  // namespace learnspace
