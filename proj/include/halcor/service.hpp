#pragma once

#include <string>

#include "halcor/pipeline.hpp"

namespace httplib {
class Server;
}

namespace halcor {

// POST /correct takes one sample object and answers with its trace, the same
// bytes `correct` writes for that line. GET /health answers "ok".
// A body that is not a sample gets 400 with {"error", "message"}.
void mount_service_routes(httplib::Server& server, const Pipeline& pipeline);

// Blocks until the server stops. Throws BindError when the address is taken.
void serve(const Pipeline& pipeline, const std::string& host, int port);

}  // namespace halcor
