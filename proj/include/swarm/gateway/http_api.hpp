#pragma once

// HTTP front end for a SessionManager.
//
//   POST   /sessions                 {"config": {...}, "policy": "...", "tick_ms": n}
//   GET    /sessions
//   GET    /sessions/{id}            current state
//   DELETE /sessions/{id}
//   POST   /sessions/{id}/events     OperatorEvent document
//   GET    /sessions/{id}/log        history records
//   GET    /sessions/{id}/csv        stepped snapshots as CSV
//   GET    /sessions/{id}/stream     server-sent events, one JSON document per "data:" frame
//   GET    /rules                    decision rule table
//   GET    /health
//
// Errors are {"error": {"code", "message"[, "field"]}}.

#include <chrono>
#include <cstddef>
#include <memory>
#include <string>

#include "swarm/gateway/session_manager.hpp"

namespace swarm::gateway {

struct ServerOptions {
    // When non-empty every request except /health and CORS preflight must
    // carry it in X-API-Key (or ?api_key= for browser event streams).
    std::string api_key;
    std::size_t worker_threads = 32;
    std::chrono::milliseconds stream_poll{200};
    std::chrono::milliseconds keepalive{15000};
};

class GatewayServer {
public:
    explicit GatewayServer(SessionManager& sessions, ServerOptions options = {});
    ~GatewayServer();

    GatewayServer(const GatewayServer&) = delete;
    GatewayServer& operator=(const GatewayServer&) = delete;

    // port 0 picks a free port. Returns the bound port; throws IoError.
    int bind(const std::string& host, int port);

    // Blocks until stop().
    void serve();
    void stop();
    void wait_until_ready() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace swarm::gateway
