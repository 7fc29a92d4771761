#pragma once

#include <deque>
#include <optional>
#include <string_view>

#include "proseek/frames.hpp"
#include "proseek/textdyn.hpp"

namespace proseek {

enum class TriggerKind { SustainedAttention, ContentRevisit };

std::string_view to_string(TriggerKind kind);

struct TriggerEvent {
    TriggerKind kind = TriggerKind::SustainedAttention;
    Seconds fired_at = 0.0;
    Seconds anchor_at = 0.0;  // start of the stable run, or the matched past frame
    double similarity = 0.0;
    std::optional<double> threshold_used;  // sustained attention only

    bool operator==(const TriggerEvent&) const = default;
};

struct TriggerConfig {
    double sustained_sim = 0.9;
    double revisit_sim = 0.8;
    Seconds history_horizon = 180.0;
    Seconds min_age = 20.0;
    Seconds refractory = 120.0;
    ThresholdClamp clamp;
};

struct HistoryEntry {
    Seconds timestamp;
    BigramSet bigrams;
    std::size_t char_count;
    bool repeats_previous = false;  // same bigrams as the entry before it
};

// Rolling per-frame history of recent screens.
struct FrameHistory {
    std::deque<HistoryEntry> entries;
    Seconds horizon = 180.0;
};

// Drops entries older than now - horizon.
void prune(FrameHistory& history, Seconds now);

struct TriggerState {
    struct Anchor {
        Seconds timestamp;
        BigramSet bigrams;
    };
    std::optional<Anchor> anchor;
    bool fired_for_anchor = false;
    std::optional<Seconds> last_fire_at;
};

struct StepResult {
    std::optional<TriggerEvent> event;
    bool anchor_reset = false;  // a new stable run began: a scroll boundary
};

// Sustained-attention and content-revisit detection over the frame stream.
//
// Stability is measured against the first frame of the current run (the
// anchor). Sustained attention fires once per anchor, after the stable time
// exceeds the adaptive threshold. Content revisit fires when the screen
// matches a history frame at least min_age old and some frame in between
// did not match. Any two events are at least `refractory` apart; sustained
// attention wins when both hold.
class TriggerDetector {
public:
    explicit TriggerDetector(TriggerConfig config = {});

    // `speed` is the current reading-speed estimate in chars/s.
    StepResult step(const TextFrame& frame, double speed);

    const TriggerState& state() const { return state_; }
    const FrameHistory& history() const { return history_; }
    const TriggerConfig& config() const { return config_; }

private:
    bool refractory_elapsed(Seconds now) const;
    std::optional<TriggerEvent> find_revisit(const TextFrame& frame) const;

    TriggerConfig config_;
    TriggerState state_;
    FrameHistory history_;
};

}  // namespace proseek
