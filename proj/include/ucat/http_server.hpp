/**
 * @brief HTTP routes for ucat::service::Service (cpp-httplib).
 *
 *   POST /api/sessions                 PUT  /api/sessions/{id}/rus
 *   PUT  /api/sessions/{id}/usecase    POST /api/sessions/{id}/extract
 *   PUT  /api/sessions/{id}/types      POST /api/sessions/{id}/ontology
 *   POST /api/sessions/{id}/query      POST /api/sessions/{id}/match
 *   GET  /api/sessions/{id}
 * Static UI files are served from `/` when a directory is given.
 */
#pragma once

#include <filesystem>
#include <string>

#include <httplib.h>
#include <json.hpp>

#include "ucat/service.hpp"

namespace ucat::service {

inline void mount(httplib::Server& server, Service& svc,
                  const std::filesystem::path& static_dir = {}) {
  auto reply = [](httplib::Response& res, const ApiResponse& r) {
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
  };

  // Parses the request body; empty bodies read as `{}`.
  auto with_body = [reply](auto handler) {
    return [reply, handler](const httplib::Request& req, httplib::Response& res) {
      json body = json::object();
      if (!req.body.empty()) {
        body = json::parse(req.body, nullptr, false);
        if (body.is_discarded()) {
          reply(res, {400, error_json(ErrorCode::SyntaxError, "request body is not valid JSON")});
          return;
        }
      }
      reply(res, handler(req.matches[1].str(), body));
    };
  };

  const std::string id = R"(/api/sessions/([A-Za-z0-9_-]+))";

  server.Post("/api/sessions", [&svc, reply](const httplib::Request&, httplib::Response& res) {
    reply(res, svc.create_session());
  });
  server.Get(id, [&svc, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, svc.get_session(req.matches[1].str()));
  });
  server.Put(id + "/rus", with_body([&svc](const std::string& sid, const json& b) {
    return svc.put_rus(sid, b);
  }));
  server.Put(id + "/usecase", with_body([&svc](const std::string& sid, const json& b) {
    return svc.put_usecase(sid, b);
  }));
  server.Post(id + "/extract", with_body([&svc](const std::string& sid, const json&) {
    return svc.extract(sid);
  }));
  server.Put(id + "/types", with_body([&svc](const std::string& sid, const json& b) {
    return svc.put_types(sid, b);
  }));
  server.Post(id + "/ontology", with_body([&svc](const std::string& sid, const json& b) {
    return svc.generate_ontology(sid, b);
  }));
  server.Post(id + "/query", with_body([&svc](const std::string& sid, const json& b) {
    return svc.run_query(sid, b);
  }));
  server.Post(id + "/match", with_body([&svc](const std::string& sid, const json&) {
    return svc.run_catalog(sid);
  }));

  if (!static_dir.empty()) server.set_mount_point("/", static_dir.string());
}

}  // namespace ucat::service
