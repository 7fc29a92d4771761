#pragma once

#include <condition_variable>
#include <deque>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <unordered_map>

#include "proseek/engine.hpp"

namespace httplib {
class Server;
}

namespace proseek {

// Local HTTP API over an Engine running with asynchronous cards.
//
//   GET  /v1/state        memory snapshot
//   GET  /v1/suggestions  cards, newest first
//   GET  /v1/events       server-sent events, one JSON object per card/warning
//   POST /v1/frames       {"t": seconds, "text": string}
//   POST /v1/feedback     {"card_id": string, "status": "accepted"|"dismissed"}
class Service {
public:
    // Builds components from config. When config.journal_path exists, memory
    // is restored from it before new records are appended.
    explicit Service(const EngineConfig& config);
    Service(const EngineConfig& config, EngineComponents components);
    ~Service();
    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    // Binds config.host:config.port (port 0 picks a free port) and serves on
    // a background thread. Returns the bound port. Throws Error when the
    // address cannot be bound.
    int start();
    void stop();
    // Blocks until stop() is called from another thread or a signal handler.
    void wait();

    int port() const { return port_; }
    std::size_t subscriber_count();
    Engine& engine() { return *engine_; }

private:
    struct Subscriber {
        std::deque<std::string> queue;
    };

    void install_routes();
    void broadcast(const EngineEvent& event);

    EngineConfig config_;
    std::unique_ptr<FileJournal> journal_;
    std::unique_ptr<Engine> engine_;
    std::unique_ptr<httplib::Server> server_;
    std::thread thread_;
    int port_ = 0;
    std::size_t listener_id_ = 0;

    std::mutex sub_mu_;
    std::condition_variable sub_cv_;
    std::unordered_map<std::size_t, std::shared_ptr<Subscriber>> subscribers_;
    std::size_t next_subscriber_ = 1;
    bool stopping_ = false;
};

}  // namespace proseek
