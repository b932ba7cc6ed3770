#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include <json.hpp>

namespace httplib {
class Server;
}

namespace learnspace {

inline constexpr int kSchemaVersion = 1;

struct ServiceOptions {
  std::uint64_t max_states = std::uint64_t{1} << 20;  // larger spaces are refused with 422
  std::string persist_path;                            // append-only JSON lines; empty disables
};

struct Reply {
  int status = 200;
  nlohmann::json body;
};

/// In-memory store of spaces and assessment sessions. Spaces are immutable
/// once created; each session is mutated under its own lock, so concurrent
/// answers to one session are serialized and all but one see 409.
class SessionService {
public:
  explicit SessionService(ServiceOptions opts = {});
  ~SessionService();
  SessionService(const SessionService&) = delete;
  SessionService& operator=(const SessionService&) = delete;

  Reply create_space(const nlohmann::json& body);  // {format, text}
  Reply list_spaces() const;
  Reply get_space(const std::string& id) const;
  Reply create_session(const nlohmann::json& body);  // {space_id, config?}
  Reply answer(const std::string& session_id, const nlohmann::json& body);  // {concept, correct}
  Reply get_session(const std::string& session_id) const;
  Reply delete_session(const std::string& session_id);

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Registers the JSON endpoints on `server`; a non-empty `static_dir` is
/// served at the root for the browser client.
void install_routes(httplib::Server& server, SessionService& service, const std::string& static_dir = {});

}  // namespace learnspace
