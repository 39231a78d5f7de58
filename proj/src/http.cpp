#include "pal/http.hpp"

namespace pal {

namespace {

void send(httplib::Response& res, const Response& r) {
  res.status = r.status;
  res.set_content(r.body, r.content_type);
}

} // namespace

void mount_routes(httplib::Server& server, Service& service) {
  server.Post("/banks", [&](const httplib::Request& req, httplib::Response& res) {
    send(res, service.upload_bank(req.body));
  });
  server.Post("/banks/compile", [&](const httplib::Request& req, httplib::Response& res) {
    send(res, service.compile_bank(req.body));
  });
  server.Post("/sessions", [&](const httplib::Request& req, httplib::Response& res) {
    send(res, service.create_session(req.body));
  });
  server.Get(R"(/sessions/([A-Za-z0-9_-]+)/next)", [&](const httplib::Request& req, httplib::Response& res) {
    send(res, service.next_question(req.matches[1]));
  });
  server.Post(R"(/sessions/([A-Za-z0-9_-]+)/answer)", [&](const httplib::Request& req, httplib::Response& res) {
    send(res, service.submit_answer(req.matches[1], req.body));
  });
  server.Get(R"(/sessions/([A-Za-z0-9_-]+)/state)", [&](const httplib::Request& req, httplib::Response& res) {
    send(res, service.state(req.matches[1]));
  });
  server.Get(R"(/sessions/([A-Za-z0-9_-]+)/summary)", [&](const httplib::Request& req, httplib::Response& res) {
    send(res, service.summary(req.matches[1]));
  });
  server.Get(R"(/sessions/([A-Za-z0-9_-]+)/events)", [&](const httplib::Request& req, httplib::Response& res) {
    send(res, service.events(req.matches[1]));
  });
  server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (res.body.empty()) {
      const Response r = error_response(ErrorCode::not_found, "no such route");
      res.set_content(r.body, r.content_type);
    }
  });
}

} // namespace pal
