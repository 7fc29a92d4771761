#include "proseek/textdyn.hpp"

#include <algorithm>
#include <string>

#include "proseek/error.hpp"
#include "proseek/kernels.hpp"

namespace proseek {

SimilarityReport jaccard(const BigramSet& a, const BigramSet& b) {
    SimilarityReport r;
    r.a_size = a.size();
    r.b_size = b.size();
    r.intersection = kernels::intersection_size(a, b);
    r.unions = r.a_size + r.b_size - r.intersection;
    r.value = r.unions == 0 ? 1.0 : static_cast<double>(r.intersection) / static_cast<double>(r.unions);
    return r;
}

ReadingSpeedEstimator::ReadingSpeedEstimator(SpeedConfig config) : config_(config) {
    if (config_.capacity == 0) throw ContractViolation("speed estimator capacity must be positive");
    if (!(config_.min_speed > 0.0) || config_.max_speed < config_.min_speed) {
        throw ContractViolation("speed clamps must satisfy 0 < min_speed <= max_speed");
    }
}

void ReadingSpeedEstimator::observe(Seconds timestamp, std::size_t new_chars) {
    if (!events_.empty() && !(timestamp > events_.back().timestamp)) {
        throw SequencingError("scroll observation at " + std::to_string(timestamp) +
                              " does not follow " + std::to_string(events_.back().timestamp));
    }
    events_.push_back({timestamp, new_chars});
    while (events_.size() > config_.capacity) events_.pop_front();
}

double ReadingSpeedEstimator::estimate() const {
    if (events_.size() < 3) return config_.default_speed;
    const double duration = events_.back().timestamp - events_.front().timestamp;
    if (!(duration > 0.0)) return config_.default_speed;
    double chars = 0.0;
    for (std::size_t i = 1; i < events_.size(); ++i) chars += static_cast<double>(events_[i].new_chars);
    return std::clamp(chars / duration, config_.min_speed, config_.max_speed);
}

double adaptive_threshold(std::size_t char_count, double speed, ThresholdClamp clamp) {
    if (!(speed > 0.0)) throw ContractViolation("adaptive_threshold: speed must be positive");
    return std::max(clamp.min_seconds, std::min(clamp.max_seconds, static_cast<double>(char_count) / speed));
}

}  // namespace proseek
