#include "dalab/server.hpp"

#include <httplib.h>

namespace dalab {

HttpServer::HttpServer(std::shared_ptr<ApiRouter> router, std::optional<std::string> static_dir)
    : router_(std::move(router)), server_(std::make_unique<httplib::Server>()) {
    if (static_dir && !server_->set_mount_point("/", *static_dir))
        throw InvalidInput("static directory " + *static_dir + " does not exist");
    auto handler = [this](const httplib::Request& req, httplib::Response& res) {
        ApiRequest r{req.method, req.path, {}, req.body};
        for (const auto& [k, v] : req.headers) r.headers.emplace(k, v);
        ApiResponse out = router_->handle(r);
        res.status = out.status;
        res.set_content(out.body, out.content_type);
    };
    server_->Get(R"(/sessions(/.*)?)", handler);
    server_->Post(R"(/sessions(/.*)?)", handler);
    server_->Put(R"(/sessions(/.*)?)", handler);
    server_->Delete(R"(/sessions(/.*)?)", handler);
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
    if (port == 0) return server_->bind_to_any_port(host);
    return server_->bind_to_port(host, port) ? port : -1;
}

bool HttpServer::listen() { return server_->listen_after_bind(); }

void HttpServer::stop() {
    if (server_) server_->stop();
}

}  // namespace dalab
