#include "swarm/gateway/http_api.hpp"

#include <atomic>

#include <httplib.h>
#include <spdlog/spdlog.h>

#include "swarm/metrics_report.hpp"

namespace swarm::gateway {

namespace {

constexpr const char* kJson = "application/json";

int status_for(GatewayError::Code code) {
    switch (code) {
        case GatewayError::Code::NotFound: return 404;
        case GatewayError::Code::Conflict: return 409;
        case GatewayError::Code::Validation: return 400;
        case GatewayError::Code::Capacity: return 503;
    }
    return 500;
}

void send_json(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), kJson);
}

void send_error(httplib::Response& res, int status, std::string_view code, const std::string& message,
                const std::string& field = {}) {
    json err{{"code", code}, {"message", message}};
    if (!field.empty()) err["field"] = field;
    send_json(res, status, json{{"error", std::move(err)}});
}

void send_error(httplib::Response& res, const GatewayError& e, unsigned retry_after_s) {
    if (e.code() == GatewayError::Code::Capacity) res.set_header("Retry-After", std::to_string(retry_after_s));
    send_error(res, status_for(e.code()), to_string(e.code()), e.what(), e.field());
}

nlohmann::json parse_body(const httplib::Request& req, bool allow_empty) {
    if (req.body.find_first_not_of(" \t\r\n") == std::string::npos) {
        if (allow_empty) return nlohmann::json::object();
        throw GatewayError(GatewayError::Code::Validation, "body: request body is empty", "body");
    }
    auto doc = nlohmann::json::parse(req.body, nullptr, false);
    if (doc.is_discarded()) throw GatewayError(GatewayError::Code::Validation, "body: not valid JSON", "body");
    return doc;
}

}  // namespace

struct GatewayServer::Impl {
    SessionManager& sessions;
    ServerOptions options;
    httplib::Server server;
    std::atomic<bool> stopping{false};

    Impl(SessionManager& s, ServerOptions o) : sessions(s), options(std::move(o)) { install(); }

    template <typename Fn>
    void guarded(httplib::Response& res, Fn&& fn) {
        try {
            fn();
        } catch (const GatewayError& e) {
            send_error(res, e, sessions.options().retry_after_s);
        } catch (const ConfigError& e) {
            send_error(res, 400, "validation", e.what(), e.field());
        }
    }

    void install() {
        const auto threads = options.worker_threads;
        server.new_task_queue = [threads] { return new httplib::ThreadPool(threads); };

        server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                                    {"Access-Control-Allow-Headers", "Content-Type, X-API-Key"},
                                    {"Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS"}});

        server.set_pre_routing_handler([this](const httplib::Request& req, httplib::Response& res) {
            if (options.api_key.empty() || req.method == "OPTIONS" || req.path == "/health")
                return httplib::Server::HandlerResponse::Unhandled;
            const auto& key = req.has_header("X-API-Key") ? req.get_header_value("X-API-Key")
                                                          : req.get_param_value("api_key");
            if (key == options.api_key) return httplib::Server::HandlerResponse::Unhandled;
            send_error(res, 401, "unauthorized", "missing or invalid API key");
            return httplib::Server::HandlerResponse::Handled;
        });

        server.set_exception_handler([](const httplib::Request& req, httplib::Response& res, std::exception_ptr ep) {
            std::string what = "unknown error";
            try {
                std::rethrow_exception(ep);
            } catch (const std::exception& e) {
                what = e.what();
            } catch (...) {
            }
            spdlog::error("{} {}: {}", req.method, req.path, what);
            send_error(res, 500, "internal", what);
        });

        server.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

        server.Get("/health", [this](const httplib::Request&, httplib::Response& res) {
            send_json(res, 200, json{{"status", "ok"}, {"sessions", sessions.size()}});
        });

        server.Get("/rules", [](const httplib::Request&, httplib::Response& res) {
            res.set_content(export_rule_table(), kJson);
        });

        server.Post("/sessions", [this](const httplib::Request& req, httplib::Response& res) {
            guarded(res, [&] { create_session(req, res); });
        });

        server.Get("/sessions", [this](const httplib::Request&, httplib::Response& res) {
            send_json(res, 200, json{{"sessions", sessions.ids()}});
        });

        server.Get(R"(/sessions/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
            guarded(res, [&] { send_json(res, 200, sessions.get(req.matches[1])->state()); });
        });

        server.Delete(R"(/sessions/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
            guarded(res, [&] {
                if (!sessions.remove(req.matches[1]))
                    throw GatewayError(GatewayError::Code::NotFound, "unknown session '" + req.matches[1].str() + "'");
                res.status = 204;
            });
        });

        server.Post(R"(/sessions/([^/]+)/events)", [this](const httplib::Request& req, httplib::Response& res) {
            guarded(res, [&] { post_event(req, res); });
        });

        server.Get(R"(/sessions/([^/]+)/log)", [this](const httplib::Request& req, httplib::Response& res) {
            guarded(res, [&] {
                const auto session = sessions.get(req.matches[1]);
                send_json(res, 200, json{{"session_id", session->id()}, {"records", session->history()}});
            });
        });

        server.Get(R"(/sessions/([^/]+)/csv)", [this](const httplib::Request& req, httplib::Response& res) {
            guarded(res, [&] { res.set_content(sessions.get(req.matches[1])->csv(), "text/csv"); });
        });

        server.Get(R"(/sessions/([^/]+)/stream)", [this](const httplib::Request& req, httplib::Response& res) {
            guarded(res, [&] { open_stream(req, res); });
        });
    }

    void create_session(const httplib::Request& req, httplib::Response& res) {
        const auto body = parse_body(req, true);
        if (!body.is_object()) throw GatewayError(GatewayError::Code::Validation, "body: must be an object", "body");
        for (const auto& [key, _] : body.items()) {
            if (key != "config" && key != "policy" && key != "tick_ms")
                throw GatewayError(GatewayError::Code::Validation, key + ": unknown field", key);
        }

        const auto config = run_config_from_json(body.value("config", nlohmann::json()));
        auto policy = ApplyPolicy::RequireConfirmation;
        if (body.contains("policy")) {
            const auto& p = body["policy"];
            const auto parsed = p.is_string() ? parse_policy(p.get<std::string>()) : std::nullopt;
            if (!parsed)
                throw GatewayError(GatewayError::Code::Validation,
                                   "policy: must be one of auto_apply, require_confirmation", "policy");
            policy = *parsed;
        }
        std::optional<unsigned> tick_ms;
        if (body.contains("tick_ms")) {
            const auto& t = body["tick_ms"];
            if (!t.is_number_unsigned() || t.get<std::uint64_t>() < kMinTickMs || t.get<std::uint64_t>() > kMaxTickMs)
                throw GatewayError(GatewayError::Code::Validation,
                                   "tick_ms: must be an integer between " + std::to_string(kMinTickMs) + " and " +
                                       std::to_string(kMaxTickMs),
                                   "tick_ms");
            tick_ms = t.get<unsigned>();
        }

        const auto session = sessions.create(config, policy, tick_ms);
        res.set_header("Location", "/sessions/" + session->id());
        send_json(res, 201, json{{"id", session->id()}, {"state", session->state()}});
    }

    void post_event(const httplib::Request& req, httplib::Response& res) {
        const auto session = sessions.get(req.matches[1]);
        const auto body = parse_body(req, false);
        OperatorEvent event;
        try {
            event = parse_event(body);
        } catch (const GatewayError& e) {
            session->record_rejected(body, e);
            throw;
        }
        const auto outcome = session->handle(event);
        json ack;
        ack["accepted"] = true;
        ack["event"] = event_to_json(event);
        ack["iteration"] = outcome.iteration;
        ack["recommendation"] = outcome.recommendation ? recommendation_to_json(*outcome.recommendation) : json(nullptr);
        ack["applied"] = outcome.applied;
        send_json(res, 200, ack);
    }

    void open_stream(const httplib::Request& req, httplib::Response& res) {
        const auto session = sessions.get(req.matches[1]);
        const auto sub = session->subscribe();
        auto last_write = std::make_shared<std::chrono::steady_clock::time_point>(std::chrono::steady_clock::now());

        res.set_header("Cache-Control", "no-cache");
        res.set_header("X-Accel-Buffering", "no");
        res.set_chunked_content_provider(
            "text/event-stream",
            [this, sub, last_write](std::size_t, httplib::DataSink& sink) {
                if (stopping) {
                    sink.done();
                    return true;
                }
                if (auto msg = sub->pop(options.stream_poll)) {
                    const auto frame = "data: " + *msg + "\n\n";
                    *last_write = std::chrono::steady_clock::now();
                    return sink.write(frame.data(), frame.size());
                }
                if (sub->closed()) {
                    if (sub->overflowed()) {
                        const json err{{"type", "error"},
                                       {"code", "overflow"},
                                       {"message", "subscriber fell behind; resubscribe to resync"}};
                        const auto frame = "data: " + err.dump() + "\n\n";
                        sink.write(frame.data(), frame.size());
                    }
                    sink.done();
                    return true;
                }
                if (std::chrono::steady_clock::now() - *last_write >= options.keepalive) {
                    *last_write = std::chrono::steady_clock::now();
                    return sink.write(": keepalive\n\n", 13);
                }
                return sink.is_writable();
            },
            [session, sub](bool) { session->unsubscribe(sub); });
    }
};

GatewayServer::GatewayServer(SessionManager& sessions, ServerOptions options)
    : impl_(std::make_unique<Impl>(sessions, std::move(options))) {}

GatewayServer::~GatewayServer() { stop(); }

int GatewayServer::bind(const std::string& host, int port) {
    if (port == 0) {
        const int bound = impl_->server.bind_to_any_port(host);
        if (bound <= 0) throw IoError("cannot bind " + host);
        return bound;
    }
    if (!impl_->server.bind_to_port(host, port))
        throw IoError("cannot bind " + host + ":" + std::to_string(port));
    return port;
}

void GatewayServer::serve() { impl_->server.listen_after_bind(); }

void GatewayServer::stop() {
    impl_->stopping = true;
    if (impl_->server.is_running()) impl_->server.stop();
}

void GatewayServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace swarm::gateway
