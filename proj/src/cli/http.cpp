#include "rsyn/cli.hpp"
#include "rsyn/errors.hpp"

#include "httplib.h"

namespace rsyn {

struct HttpServer::Impl {
    SessionService& service;
    httplib::Server server;
    explicit Impl(SessionService& s) : service(s) {}
};

HttpServer::HttpServer(SessionService& service) : impl_(std::make_unique<Impl>(service)) {
    auto handler = [this](const httplib::Request& req, httplib::Response& res) {
        auto out = impl_->service.handle(req.method, req.path, req.body);
        res.status = out.status;
        res.set_content(out.body.dump(), "application/json");
    };
    const std::string any = R"(/sessions(/.*)?)";
    impl_->server.Get(any, handler);
    impl_->server.Post(any, handler);
    impl_->server.Delete(any, handler);
}

HttpServer::~HttpServer() = default;

int HttpServer::bind(const std::string& host, int port) {
    int bound = port == 0 ? impl_->server.bind_to_any_port(host) : (impl_->server.bind_to_port(host, port) ? port : -1);
    if (bound < 0)
        throw Error("cannot bind " + host + ":" + std::to_string(port));
    return bound;
}

void HttpServer::listen() { impl_->server.listen_after_bind(); }

void HttpServer::stop() { impl_->server.stop(); }

} // namespace rsyn
