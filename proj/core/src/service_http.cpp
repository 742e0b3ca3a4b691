// Copyright 2026 The alignscope Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <httplib.h>

#include "alignscope/error.hpp"
#include "alignscope/service.hpp"

namespace alignscope::service {

struct HttpServer::Impl {
  StudyService& service;
  httplib::Server server;

  explicit Impl(StudyService& s) : service(s) {
    auto route = [this](const httplib::Request& req, httplib::Response& res) {
      Request request;
      request.method = req.method;
      request.path = req.path;
      request.body = req.body;
      request.authorization = req.get_header_value("Authorization");
      for (const auto& [key, value] : req.params) request.query.emplace(key, value);
      const Response out = service.handle(request);
      res.status = out.status;
      for (const auto& [key, value] : out.headers) res.set_header(key, value);
      res.set_content(out.body, out.content_type);
    };
    server.Get(R"(/.*)", route);
    server.Post(R"(/.*)", route);
  }
};

HttpServer::HttpServer(StudyService& service) : impl_(std::make_unique<Impl>(service)) {}

HttpServer::~HttpServer() { impl_->server.stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) {
    const int bound = impl_->server.bind_to_any_port(host);
    if (bound < 0) throw Error(ErrorKind::kConfig, "cannot bind " + host);
    return bound;
  }
  if (!impl_->server.bind_to_port(host, port)) {
    throw Error(ErrorKind::kConfig, "cannot bind " + host + ":" + std::to_string(port));
  }
  return port;
}

bool HttpServer::listen() { return impl_->server.listen_after_bind(); }

void HttpServer::stop() { impl_->server.stop(); }

}  // namespace alignscope::service
