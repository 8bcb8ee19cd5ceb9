#pragma once

// Read-only HTTP API over one archive. Every response body is JSON; errors
// are {"error": {"code", "subject", "message"}} with status 400 or 404.

#include <memory>
#include <string>

#include "fresco/archive.hpp"
#include "fresco/tools/engine_config.hpp"

namespace httplib {
class Server;
}

namespace fresco::tools {

class Service {
 public:
  Service(const Archive& archive, EngineConfig config);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Blocks until stop(). Returns false when the address cannot be bound.
  bool listen(const std::string& host, int port);
  /// Binds to an ephemeral port and returns it (or -1); call listen_after_bind next.
  int bind_any_port(const std::string& host);
  bool listen_after_bind();
  void stop();
  bool running() const;

 private:
  void routes();

  const Archive& archive_;
  EngineConfig config_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace fresco::tools
