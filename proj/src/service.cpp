#include "halcor/service.hpp"

#include <httplib.h>
#include <fmt/format.h>

#include "halcor/errors.hpp"

namespace halcor {

using nlohmann::json;

void mount_service_routes(httplib::Server& server, const Pipeline& pipeline) {
  server.Get("/health", [](const httplib::Request&, httplib::Response& res) { res.set_content("ok", "text/plain"); });
  server.Post("/correct", [&pipeline](const httplib::Request& req, httplib::Response& res) {
    SampleInput sample;
    try {
      sample = sample_from_json(json::parse(req.body));
    } catch (const json::exception& e) {
      res.status = 400;
      res.set_content(json{{"error", "invalid_json"}, {"message", e.what()}}.dump(), "application/json");
      return;
    } catch (const SchemaError& e) {
      res.status = 400;
      res.set_content(json{{"error", "invalid_sample"}, {"message", e.what()}}.dump(), "application/json");
      return;
    }
    res.set_content(serialize_trace(pipeline.run(sample)), "application/json");
  });
}

void serve(const Pipeline& pipeline, const std::string& host, int port) {
  httplib::Server server;
  mount_service_routes(server, pipeline);
  if (!server.bind_to_port(host, port)) throw BindError(fmt::format("cannot bind {}:{}", host, port));
  server.listen_after_bind();
}

}  // namespace halcor
