#include "proseek/service.hpp"

#include <httplib.h>

#include <chrono>
#include <filesystem>

#include "proseek/error.hpp"
#include "proseek/serialize.hpp"

namespace proseek {

namespace {

using nlohmann::ordered_json;

void send_json(httplib::Response& res, int status, const ordered_json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& message) {
    ordered_json body;
    body["error"] = message;
    send_json(res, status, body);
}

ordered_json event_json(const EngineEvent& event) {
    ordered_json j;
    if (event.type == EngineEvent::Type::Card && event.card) {
        j["type"] = "card";
        j["at"] = event.at;
        j["card"] = json::to_json(*event.card);
        j["timings"] = json::to_json(event.card->timings);
    } else {
        j["type"] = "warning";
        j["at"] = event.at;
        j["message"] = event.message;
    }
    return j;
}

std::vector<JournalRecord> existing_journal(const EngineConfig& config) {
    if (config.journal_path.empty() || !std::filesystem::exists(config.journal_path)) return {};
    return read_journal(config.journal_path);
}

}  // namespace

Service::Service(const EngineConfig& config) : Service(config, make_components(config)) {}

Service::Service(const EngineConfig& config, EngineComponents components) : config_(config) {
    config_.validate();
    Engine::Options options;
    options.async_cards = true;
    options.restore_from = existing_journal(config_);
    if (!config_.journal_path.empty()) {
        journal_ = std::make_unique<FileJournal>(config_.journal_path);
        options.journal = journal_.get();
    }
    engine_ = std::make_unique<Engine>(config_, std::move(components), std::move(options));
    listener_id_ = engine_->subscribe([this](const EngineEvent& e) { broadcast(e); });
    server_ = std::make_unique<httplib::Server>();
    install_routes();
}

Service::~Service() {
    stop();
    engine_->unsubscribe(listener_id_);
    engine_->wait_idle();
}

void Service::broadcast(const EngineEvent& event) {
    std::string line = "data: " + event_json(event).dump() + "\n\n";
    {
        std::lock_guard lock(sub_mu_);
        for (auto& [id, sub] : subscribers_) sub->queue.push_back(line);
    }
    sub_cv_.notify_all();
}

void Service::install_routes() {
    auto& srv = *server_;

    srv.Get("/v1/state", [this](const httplib::Request&, httplib::Response& res) {
        auto snap = engine_->memory_snapshot();
        ordered_json body = json::to_json(*snap);
        body["frames"] = engine_->frames_seen();
        send_json(res, 200, body);
    });

    srv.Get("/v1/suggestions", [this](const httplib::Request&, httplib::Response& res) {
        auto cards = engine_->cards();
        ordered_json body = ordered_json::array();
        for (auto it = cards.rbegin(); it != cards.rend(); ++it) body.push_back(json::to_json(*it));
        send_json(res, 200, body);
    });

    srv.Post("/v1/frames", [this](const httplib::Request& req, httplib::Response& res) {
        double t = 0.0;
        std::string text;
        try {
            auto j = nlohmann::json::parse(req.body);
            if (!j.is_object() || !j.contains("t") || !j["t"].is_number() || !j.contains("text") ||
                !j["text"].is_string()) {
                send_error(res, 400, "expected {\"t\": number, \"text\": string}");
                return;
            }
            t = j["t"].get<double>();
            text = j["text"].get<std::string>();
        } catch (const nlohmann::json::exception& e) {
            send_error(res, 400, e.what());
            return;
        }
        try {
            TickResult r = engine_->ingest(text, t);
            ordered_json body;
            body["accepted"] = true;
            body["trigger"] = r.trigger ? json::to_json(*r.trigger) : ordered_json(nullptr);
            body["warnings"] = r.warnings;
            send_json(res, 200, body);
        } catch (const SequencingError& e) {
            send_error(res, 422, e.what());
        }
    });

    srv.Post("/v1/feedback", [this](const httplib::Request& req, httplib::Response& res) {
        std::string card_id;
        std::optional<CardStatus> status;
        try {
            auto j = nlohmann::json::parse(req.body);
            if (!j.is_object() || !j.contains("card_id") || !j["card_id"].is_string() || !j.contains("status") ||
                !j["status"].is_string()) {
                send_error(res, 400, "expected {\"card_id\": string, \"status\": string}");
                return;
            }
            card_id = j["card_id"].get<std::string>();
            status = card_status_from_string(j["status"].get<std::string>());
        } catch (const nlohmann::json::exception& e) {
            send_error(res, 400, e.what());
            return;
        }
        if (!status || *status == CardStatus::Pending) {
            send_error(res, 400, "status must be \"accepted\" or \"dismissed\"");
            return;
        }
        switch (engine_->feedback(card_id, *status)) {
            case FeedbackResult::Ok: {
                auto card = engine_->card(card_id);
                send_json(res, 200, json::to_json(*card));
                return;
            }
            case FeedbackResult::UnknownCard:
                send_error(res, 404, "unknown card " + card_id);
                return;
            case FeedbackResult::InvalidTransition:
                send_error(res, 409, "card " + card_id + " is not pending");
                return;
        }
    });

    srv.Get("/v1/events", [this](const httplib::Request&, httplib::Response& res) {
        auto sub = std::make_shared<Subscriber>();
        std::size_t id = 0;
        {
            std::lock_guard lock(sub_mu_);
            id = next_subscriber_++;
            subscribers_.emplace(id, sub);
        }
        res.set_header("Cache-Control", "no-cache");
        res.set_chunked_content_provider(
            "text/event-stream",
            [this, sub](std::size_t, httplib::DataSink& sink) {
                std::unique_lock lock(sub_mu_);
                sub_cv_.wait_for(lock, std::chrono::milliseconds(500),
                                 [&] { return stopping_ || !sub->queue.empty(); });
                if (stopping_) {
                    lock.unlock();
                    sink.done();
                    return true;
                }
                std::deque<std::string> pending;
                pending.swap(sub->queue);
                lock.unlock();
                if (pending.empty()) return sink.write(": keep-alive\n\n", 14);
                for (const auto& line : pending)
                    if (!sink.write(line.data(), line.size())) return false;
                return true;
            },
            [this, id](bool) {
                std::lock_guard lock(sub_mu_);
                subscribers_.erase(id);
            });
    });
}

int Service::start() {
    if (thread_.joinable()) return port_;
    {
        std::lock_guard lock(sub_mu_);
        stopping_ = false;
    }
    // httplib's default adds SO_REUSEPORT, which lets a second server bind a
    // port already in use. Keep SO_REUSEADDR only.
    server_->set_socket_options([](socket_t sock) {
        int yes = 1;
        ::setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
    });
    if (config_.port == 0) {
        port_ = server_->bind_to_any_port(config_.host);
        if (port_ < 0) throw Error("cannot bind " + config_.host);
    } else {
        if (!server_->bind_to_port(config_.host, config_.port))
            throw Error("cannot bind " + config_.host + ":" + std::to_string(config_.port) +
                        " (address in use or not permitted)");
        port_ = config_.port;
    }
    thread_ = std::thread([this] { server_->listen_after_bind(); });
    server_->wait_until_ready();
    return port_;
}

void Service::stop() {
    {
        std::lock_guard lock(sub_mu_);
        stopping_ = true;
    }
    sub_cv_.notify_all();
    if (server_) server_->stop();
    if (thread_.joinable()) thread_.join();
}

std::size_t Service::subscriber_count() {
    std::lock_guard lock(sub_mu_);
    return subscribers_.size();
}

void Service::wait() {
    if (thread_.joinable()) thread_.join();
}

}  // namespace proseek
