#pragma once

#include <cstddef>
#include <deque>

#include "proseek/frames.hpp"

namespace proseek {

struct SimilarityReport {
    double value = 1.0;
    std::size_t a_size = 0;
    std::size_t b_size = 0;
    std::size_t intersection = 0;
    std::size_t unions = 0;
};

// Jaccard similarity of two bigram sets; two empty sets compare as 1.
SimilarityReport jaccard(const BigramSet& a, const BigramSet& b);

struct SpeedConfig {
    double default_speed = 100.0;  // chars/s
    double min_speed = 10.0;
    double max_speed = 500.0;
    std::size_t capacity = 20;
};

// Reading speed from scroll observations.
//
// The estimate is the through-origin least-squares slope of cumulative
// characters against elapsed time, which for a window of events reduces to
// sum(new_chars) / (t_last - t_first). The first event in the window is the
// time origin, so its characters are not counted.
class ReadingSpeedEstimator {
public:
    struct Event {
        Seconds timestamp;
        std::size_t new_chars;
    };

    ReadingSpeedEstimator() = default;
    explicit ReadingSpeedEstimator(SpeedConfig config);

    // Throws SequencingError unless timestamp is after the last event.
    void observe(Seconds timestamp, std::size_t new_chars);

    double estimate() const;

    const std::deque<Event>& events() const { return events_; }
    const SpeedConfig& config() const { return config_; }

private:
    SpeedConfig config_;
    std::deque<Event> events_;
};

struct ThresholdClamp {
    double min_seconds = 10.0;
    double max_seconds = 60.0;
};

// max(min, min(max, char_count / speed)). Throws ContractViolation when speed <= 0.
double adaptive_threshold(std::size_t char_count, double speed, ThresholdClamp clamp = {});

}  // namespace proseek
