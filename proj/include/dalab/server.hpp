#pragma once

// HTTP adapter for ApiRouter. Optionally serves a static UI bundle from
// `static_dir`; API routes take precedence only where no file matches.

#include <atomic>
#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "dalab/api.hpp"

namespace httplib {
class Server;
}

namespace dalab {

class HttpServer {
public:
    HttpServer(std::shared_ptr<ApiRouter> router, std::optional<std::string> static_dir = std::nullopt);
    ~HttpServer();

    /// Binds; port 0 picks a free port. Returns the bound port or -1.
    int bind(const std::string& host, int port);
    /// Blocks until stop().
    bool listen();
    void stop();

private:
    std::shared_ptr<ApiRouter> router_;
    std::unique_ptr<httplib::Server> server_;
};

}  // namespace dalab
