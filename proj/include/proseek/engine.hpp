#pragma once

#include <fstream>
#include <functional>
#include <future>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "proseek/adapters.hpp"
#include "proseek/config.hpp"
#include "proseek/frames.hpp"
#include "proseek/journal.hpp"
#include "proseek/memory.hpp"
#include "proseek/qgen.hpp"
#include "proseek/retrieval.hpp"
#include "proseek/textdyn.hpp"
#include "proseek/triggers.hpp"

namespace proseek {

// Wall-clock seconds spent per pipeline stage for one card.
struct StageTimings {
    double sensing_memory = 0.0;
    double question_gen = 0.0;
    double search = 0.0;
    double total = 0.0;
};

enum class CardStatus { Pending, Accepted, Dismissed };

std::string_view to_string(CardStatus status);
std::optional<CardStatus> card_status_from_string(std::string_view s);

struct QuestionResults {
    GeneratedQuestion question;
    std::vector<SearchResult> results;
};

struct SuggestionCard {
    std::string card_id;
    TriggerEvent trigger;
    std::vector<QuestionResults> questions;
    Seconds created_at = 0.0;
    CardStatus status = CardStatus::Pending;
    StageTimings timings;
};

struct EngineEvent {
    enum class Type { Card, Warning };
    Type type = Type::Warning;
    std::optional<SuggestionCard> card;
    std::string message;
    Seconds at = 0.0;
};

struct TickResult {
    std::optional<TriggerEvent> trigger;
    std::optional<SuggestionCard> card;  // set when cards are produced inline
    std::vector<std::string> warnings;
};

enum class FeedbackResult { Ok, UnknownCard, InvalidTransition };

// Adapters, embedder and search backend an engine runs with.
struct EngineComponents {
    std::shared_ptr<LlmAdapter> llm;
    std::shared_ptr<const Embedder> embedder;
    std::shared_ptr<const SearchBackend> search;  // null when search is disabled
};

// Builds components from config: adapter selection, timeout and
// single-flight wrappers, embedder, index (when enabled).
EngineComponents make_components(const EngineConfig& config);

// The frame loop: delta extraction, memory, session/profile maintenance,
// trigger detection, then question generation and search for each trigger.
//
// One thread drives tick()/ingest(). Readers (snapshots, cards, feedback)
// may run concurrently. With async_cards, card production runs on a worker
// with one card in flight; triggers arriving while it is busy are dropped.
class Engine {
public:
    struct Options {
        bool async_cards = false;
        JournalSink* journal = nullptr;             // not owned
        std::vector<JournalRecord> restore_from;  // memory journal to resume from
    };

    Engine(EngineConfig config, EngineComponents components, Options options);
    Engine(EngineConfig config, EngineComponents components) : Engine(std::move(config), std::move(components), Options{}) {}
    ~Engine();
    Engine(const Engine&) = delete;
    Engine& operator=(const Engine&) = delete;

    // Normalizes raw text into a frame and ticks. Throws SequencingError on a
    // non-increasing timestamp.
    TickResult ingest(std::string_view raw_text, Seconds timestamp);
    TickResult tick(const TextFrame& frame);

    // Blocks until any in-flight card is finished.
    void wait_idle();

    using Listener = std::function<void(const EngineEvent&)>;
    std::size_t subscribe(Listener listener);
    void unsubscribe(std::size_t id);

    FeedbackResult feedback(const std::string& card_id, CardStatus status);

    std::shared_ptr<const MemorySnapshot> memory_snapshot() const;
    std::vector<SuggestionCard> cards() const;
    std::optional<SuggestionCard> card(const std::string& card_id) const;
    std::vector<TriggerEvent> events() const;
    std::vector<std::string> warnings() const;
    std::size_t frames_seen() const;

    const EngineConfig& config() const { return config_; }
    const EngineComponents& components() const { return components_; }

private:
    struct CardJob {
        TextFrame frame;
        TriggerEvent event;
        std::shared_ptr<const MemorySnapshot> memory;
        double sensing_memory = 0.0;
    };

    std::optional<SuggestionCard> produce_card(const CardJob& job);
    void warn(std::string message, Seconds at, std::vector<std::string>* sink);
    void emit(const EngineEvent& event);
    void publish_snapshot();

    EngineConfig config_;
    EngineComponents components_;
    Options options_;

    // frame-loop state, guarded by ingest_mu_
    mutable std::mutex ingest_mu_;
    FrameIngestor ingestor_;
    std::optional<TextFrame> prev_frame_;
    HierarchicalMemory memory_;
    TriggerDetector detector_;
    ReadingSpeedEstimator speed_;
    std::size_t pending_scroll_chars_ = 0;
    std::size_t frames_ = 0;
    std::future<void> inflight_;

    // shared with readers and the card worker, guarded by mu_
    mutable std::mutex mu_;
    std::shared_ptr<const MemorySnapshot> snapshot_;
    std::vector<SuggestionCard> cards_;
    std::vector<TriggerEvent> events_;
    std::vector<std::string> warnings_;
    std::size_t next_card_ = 1;
    std::size_t next_listener_ = 1;
    std::vector<std::pair<std::size_t, Listener>> listeners_;
    std::unique_ptr<std::ofstream> feedback_log_;
};

}  // namespace proseek
