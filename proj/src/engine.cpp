#include "proseek/engine.hpp"

#include <chrono>

#include <json.hpp>

#include "proseek/error.hpp"
#include "proseek/http_llm.hpp"
#include "proseek/text.hpp"

namespace proseek {

std::string_view to_string(CardStatus status) {
    switch (status) {
        case CardStatus::Pending: return "pending";
        case CardStatus::Accepted: return "accepted";
        case CardStatus::Dismissed: return "dismissed";
    }
    return "pending";
}

std::optional<CardStatus> card_status_from_string(std::string_view s) {
    if (s == "pending") return CardStatus::Pending;
    if (s == "accepted") return CardStatus::Accepted;
    if (s == "dismissed") return CardStatus::Dismissed;
    return std::nullopt;
}

EngineComponents make_components(const EngineConfig& config) {
    config.validate();
    EngineComponents c;
    std::shared_ptr<LlmAdapter> llm;
    if (config.llm_adapter == "identity") {
        llm = std::make_shared<IdentityLlm>();
    } else if (config.llm_adapter == "template") {
        llm = std::make_shared<TemplateLlm>(config.questions_per_trigger);
    } else {
        HttpLlmOptions opts;
        opts.endpoint = config.llm_endpoint;
        opts.model = config.llm_model;
        opts.key_env = config.llm_key_env;
        opts.timeout = std::chrono::milliseconds(static_cast<long long>(config.adapter_timeout * 1000.0));
        auto put = [&](PromptKind kind, const std::string& s) {
            if (!s.empty()) opts.instructions[kind] = s;
        };
        put(PromptKind::Summarize, config.prompt_summarize);
        put(PromptKind::Integrate, config.prompt_integrate);
        put(PromptKind::UpdateProfile, config.prompt_update_profile);
        put(PromptKind::AskExplore, config.prompt_explore);
        put(PromptKind::AskClarify, config.prompt_clarify);
        llm = std::make_shared<HttpLlm>(std::move(opts));
    }
    if (llm->single_flight()) llm = std::make_shared<SerializedLlm>(llm);
    c.llm = std::make_shared<TimeoutLlm>(
        llm, std::chrono::milliseconds(static_cast<long long>(config.adapter_timeout * 1000.0)));
    c.embedder = std::make_shared<HashEmbedder>(config.embed_dimension);

    if (config.search_enabled) {
        if (config.index_path.empty()) throw ConfigError("index_path", "required unless search_enabled is false");
        c.search = SearchBackend::open(config.index_path);
        if (c.search->index.dimension() != config.embed_dimension) {
            throw ConfigError("embed_dimension", "does not match the index dimension " +
                                                     std::to_string(c.search->index.dimension()));
        }
    }
    return c;
}

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

HierarchicalMemory build_memory(const EngineConfig& config, const EngineComponents& c,
                                const std::vector<JournalRecord>& restore_from) {
    if (restore_from.empty()) return HierarchicalMemory(config.memory(), c.llm, c.embedder);
    return HierarchicalMemory::restore(config.memory(), c.llm, c.embedder, restore_from);
}

}  // namespace

Engine::Engine(EngineConfig config, EngineComponents components, Options options)
    : config_(std::move(config)),
      components_(std::move(components)),
      options_(std::move(options)),
      memory_(build_memory(config_, components_, options_.restore_from)),
      detector_(config_.triggers()),
      speed_(config_.speed()) {
    config_.validate();
    if (!components_.llm || !components_.embedder) throw ContractViolation("engine requires an llm and an embedder");
    if (components_.search && components_.search->index.dimension() != components_.embedder->dimension()) {
        throw ConfigError("embed_dimension", "does not match the index dimension");
    }
    memory_.set_journal(options_.journal);
    if (!config_.profile_seed.empty() && !memory_.profile()) memory_.seed_profile(config_.profile_seed, 0.0);
    if (!config_.feedback_path.empty()) {
        feedback_log_ = std::make_unique<std::ofstream>(config_.feedback_path, std::ios::app);
        if (!*feedback_log_) throw ConfigError("feedback_path", "cannot open for append");
    }
    publish_snapshot();
}

Engine::~Engine() { wait_idle(); }

void Engine::publish_snapshot() {
    auto snap = std::make_shared<const MemorySnapshot>(memory_.snapshot());
    std::lock_guard lock(mu_);
    snapshot_ = std::move(snap);
}

void Engine::emit(const EngineEvent& event) {
    std::vector<Listener> targets;
    {
        std::lock_guard lock(mu_);
        for (const auto& [id, l] : listeners_) targets.push_back(l);
    }
    for (const auto& l : targets) l(event);
}

void Engine::warn(std::string message, Seconds at, std::vector<std::string>* sink) {
    {
        std::lock_guard lock(mu_);
        warnings_.push_back(message);
    }
    if (sink) sink->push_back(message);
    EngineEvent ev;
    ev.type = EngineEvent::Type::Warning;
    ev.message = std::move(message);
    ev.at = at;
    emit(ev);
}

TickResult Engine::ingest(std::string_view raw_text, Seconds timestamp) {
    TextFrame frame;
    {
        std::lock_guard lock(ingest_mu_);
        frame = ingestor_.ingest(raw_text, timestamp);
    }
    return tick(frame);
}

TickResult Engine::tick(const TextFrame& frame) {
    std::unique_lock lock(ingest_mu_);
    if (prev_frame_ && !(frame.timestamp > prev_frame_->timestamp)) {
        throw SequencingError("tick: frame at " + std::to_string(frame.timestamp) + " does not follow " +
                              std::to_string(prev_frame_->timestamp));
    }
    const auto start = std::chrono::steady_clock::now();
    TickResult result;
    const Seconds now = frame.timestamp;
    ++frames_;

    LineDelta delta;
    if (prev_frame_) {
        delta = extract_delta(*prev_frame_, frame);
    } else {
        delta.timestamp = now;
        delta.new_lines = frame.lines;
        for (const auto& l : frame.lines) delta.char_count += text::length(l);
    }
    prev_frame_ = frame;
    pending_scroll_chars_ += delta.char_count;

    try {
        memory_.append_delta(delta);
    } catch (const Error& e) {
        warn(std::string("local summary failed: ") + e.what(), now, &result.warnings);
    }
    try {
        if (memory_.synthesize_session(now)) memory_.update_profile();
    } catch (const Error& e) {
        warn(std::string("memory maintenance failed: ") + e.what(), now, &result.warnings);
    }
    publish_snapshot();

    const StepResult step = detector_.step(frame, speed_.estimate());
    if (step.anchor_reset) {
        speed_.observe(now, pending_scroll_chars_);
        pending_scroll_chars_ = 0;
    }
    if (!step.event) return result;

    result.trigger = step.event;
    {
        std::lock_guard guard(mu_);
        events_.push_back(*step.event);
    }

    CardJob job{frame, *step.event, memory_snapshot(), seconds_since(start)};
    if (!options_.async_cards) {
        lock.unlock();
        result.card = produce_card(job);
        return result;
    }
    if (inflight_.valid() && inflight_.wait_for(std::chrono::seconds(0)) != std::future_status::ready) {
        warn("trigger dropped: a card is already being produced", now, &result.warnings);
        return result;
    }
    if (inflight_.valid()) inflight_.get();
    inflight_ = std::async(std::launch::async, [this, job = std::move(job)] { produce_card(job); });
    return result;
}

std::optional<SuggestionCard> Engine::produce_card(const CardJob& job) {
    const Seconds at = job.event.fired_at;
    StageTimings timings;
    timings.sensing_memory = job.sensing_memory;

    auto qstart = std::chrono::steady_clock::now();
    QuestionBatch batch;
    try {
        const PromptContext ctx =
            assemble_context(job.frame, *job.memory, job.event, *components_.embedder, config_.qgen());
        batch = generate_questions(ctx, *components_.llm, config_.questions_per_trigger);
    } catch (const Error& e) {
        batch.questions.clear();
        batch.warning = std::string("question generation failed: ") + e.what();
    }
    timings.question_gen = seconds_since(qstart);
    if (batch.questions.empty()) {
        warn(batch.warning.value_or("no questions") + "; card suppressed", at, nullptr);
        return std::nullopt;
    }

    auto sstart = std::chrono::steady_clock::now();
    SuggestionCard card;
    try {
        for (const auto& q : batch.questions) {
            QuestionResults qr{q, {}};
            if (components_.search) {
                const auto query = embed_query(*components_.embedder, q.text);
                qr.results = search(components_.search->index, *components_.search->store, query,
                                    config_.results_per_question);
            }
            card.questions.push_back(std::move(qr));
        }
    } catch (const Error& e) {
        warn(std::string("search failed: ") + e.what() + "; card suppressed", at, nullptr);
        return std::nullopt;
    }
    timings.search = seconds_since(sstart);
    timings.total = timings.sensing_memory + timings.question_gen + timings.search;

    card.trigger = job.event;
    card.created_at = at;
    card.timings = timings;
    {
        std::lock_guard lock(mu_);
        card.card_id = "card-" + std::to_string(next_card_++);
        cards_.push_back(card);
    }
    EngineEvent ev;
    ev.type = EngineEvent::Type::Card;
    ev.card = card;
    ev.at = at;
    emit(ev);
    return card;
}

void Engine::wait_idle() {
    std::future<void> f;
    {
        std::lock_guard lock(ingest_mu_);
        f = std::move(inflight_);
    }
    if (f.valid()) f.get();
}

std::size_t Engine::subscribe(Listener listener) {
    std::lock_guard lock(mu_);
    const std::size_t id = next_listener_++;
    listeners_.emplace_back(id, std::move(listener));
    return id;
}

void Engine::unsubscribe(std::size_t id) {
    std::lock_guard lock(mu_);
    std::erase_if(listeners_, [id](const auto& p) { return p.first == id; });
}

FeedbackResult Engine::feedback(const std::string& card_id, CardStatus status) {
    std::lock_guard lock(mu_);
    for (auto& card : cards_) {
        if (card.card_id != card_id) continue;
        if (card.status != CardStatus::Pending || status == CardStatus::Pending) {
            return FeedbackResult::InvalidTransition;
        }
        card.status = status;
        if (feedback_log_) {
            nlohmann::ordered_json j;
            j["card_id"] = card_id;
            j["status"] = to_string(status);
            j["created_at"] = card.created_at;
            *feedback_log_ << j.dump() << '\n';
            feedback_log_->flush();
        }
        return FeedbackResult::Ok;
    }
    return FeedbackResult::UnknownCard;
}

std::shared_ptr<const MemorySnapshot> Engine::memory_snapshot() const {
    std::lock_guard lock(mu_);
    return snapshot_;
}

std::vector<SuggestionCard> Engine::cards() const {
    std::lock_guard lock(mu_);
    return cards_;
}

std::optional<SuggestionCard> Engine::card(const std::string& card_id) const {
    std::lock_guard lock(mu_);
    for (const auto& c : cards_) {
        if (c.card_id == card_id) return c;
    }
    return std::nullopt;
}

std::vector<TriggerEvent> Engine::events() const {
    std::lock_guard lock(mu_);
    return events_;
}

std::vector<std::string> Engine::warnings() const {
    std::lock_guard lock(mu_);
    return warnings_;
}

std::size_t Engine::frames_seen() const {
    std::lock_guard lock(ingest_mu_);
    return frames_;
}

}  // namespace proseek
