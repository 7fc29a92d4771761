#include "proseek/triggers.hpp"

#include <vector>

#include "proseek/error.hpp"
#include "proseek/kernels.hpp"

namespace proseek {

std::string_view to_string(TriggerKind kind) {
    return kind == TriggerKind::SustainedAttention ? "sustained_attention" : "content_revisit";
}

void prune(FrameHistory& history, Seconds now) {
    const Seconds cutoff = now - history.horizon;
    while (!history.entries.empty() && history.entries.front().timestamp < cutoff) history.entries.pop_front();
}

TriggerDetector::TriggerDetector(TriggerConfig config) : config_(config) {
    history_.horizon = config_.history_horizon;
}

bool TriggerDetector::refractory_elapsed(Seconds now) const {
    return !state_.last_fire_at || now - *state_.last_fire_at >= config_.refractory;
}

std::optional<TriggerEvent> TriggerDetector::find_revisit(const TextFrame& frame) const {
    const auto& entries = history_.entries;
    if (entries.empty()) return std::nullopt;

    // A static screen leaves runs of identical entries; score each run once.
    std::vector<const BigramSet*> sets;
    std::vector<std::size_t> run_of(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (i == 0 || !entries[i].repeats_previous) sets.push_back(&entries[i].bigrams);
        run_of[i] = sets.size() - 1;
    }
    const std::vector<double> run_sims = kernels::parallel::jaccard_many(frame.bigrams, sets);
    std::vector<double> sims(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) sims[i] = run_sims[run_of[i]];

    const Seconds newest_allowed = frame.timestamp - config_.min_age;
    bool left = false;
    for (std::size_t i = entries.size(); i-- > 0;) {
        const bool similar = sims[i] > config_.revisit_sim;
        if (similar && left && entries[i].timestamp <= newest_allowed) {
            return TriggerEvent{TriggerKind::ContentRevisit, frame.timestamp, entries[i].timestamp, sims[i],
                                std::nullopt};
        }
        if (!similar) left = true;
    }
    return std::nullopt;
}

StepResult TriggerDetector::step(const TextFrame& frame, double speed) {
    if (!history_.entries.empty() && !(frame.timestamp > history_.entries.back().timestamp)) {
        throw SequencingError("trigger step: frames must arrive in timestamp order");
    }
    StepResult result;
    const Seconds now = frame.timestamp;
    prune(history_, now);

    double stable_sim = state_.anchor ? jaccard(frame.bigrams, state_.anchor->bigrams).value : 0.0;
    if (!state_.anchor || stable_sim <= config_.sustained_sim) {
        state_.anchor = TriggerState::Anchor{now, frame.bigrams};
        state_.fired_for_anchor = false;
        result.anchor_reset = true;
        stable_sim = 1.0;
    }

    const double threshold = adaptive_threshold(frame.char_count, speed, config_.clamp);
    const Seconds stable_for = now - state_.anchor->timestamp;

    if (refractory_elapsed(now)) {
        if (stable_sim > config_.sustained_sim && stable_for > threshold && !state_.fired_for_anchor) {
            result.event =
                TriggerEvent{TriggerKind::SustainedAttention, now, state_.anchor->timestamp, stable_sim, threshold};
            state_.fired_for_anchor = true;
        } else {
            result.event = find_revisit(frame);
        }
        if (result.event) state_.last_fire_at = now;
    }

    const bool repeats = !history_.entries.empty() && history_.entries.back().bigrams == frame.bigrams;
    history_.entries.push_back({now, frame.bigrams, frame.char_count, repeats});
    prune(history_, now);
    return result;
}

}  // namespace proseek
