#include <algorithm>

#include "levylab/errors.hpp"
#include "levylab/pathsim.hpp"

namespace levylab::sim {

ExcursionTracker::ExcursionTracker(double slope) : slope_(slope), strict_cycles_(slope == 0.0) {
  if (slope > 0.0) throw UnsupportedModel("reflection tracker needs drift <= 0");
}

void ExcursionTracker::advance(double dt) {
  if (!(dt > 0.0)) return;
  const double c = -slope_;
  if (!in_excursion_) {
    local_time_ += dt;
    time_ += dt;
    position_ += slope_ * dt;
    infimum_ = std::min(infimum_, position_);
    return;
  }
  if (c > 0.0 && reflected_ <= c * dt) {
    // Creeps back down to the infimum before the next event.
    const double hit = reflected_ / c;
    time_ += hit;
    position_ = infimum_;
    close(time_, 0.0);
    const double rest = dt - hit;
    local_time_ += rest;
    time_ += rest;
    position_ += slope_ * rest;
    infimum_ = position_;
    return;
  }
  reflected_ -= c * dt;
  position_ += slope_ * dt;
  time_ += dt;
}

void ExcursionTracker::jump(double size) {
  position_ += size;
  if (size > 0.0) {
    if (!in_excursion_) {
      current_ = ExcursionRecord{time_, time_, size, 0.0, local_time_, false};
      reflected_ = size;
      in_excursion_ = true;
      ++opened_;
      if (on_open) on_open(current_);
    } else {
      reflected_ += size;
      current_.height = std::max(current_.height, reflected_);
    }
    return;
  }
  const double drop = -size;
  if (in_excursion_) {
    if (drop > reflected_ || (!strict_cycles_ && drop == reflected_)) {
      const double undershoot = drop - reflected_;
      infimum_ = position_;
      close(time_, undershoot);
    } else {
      reflected_ -= drop;
    }
    return;
  }
  infimum_ = position_;
  if (strict_cycles_ && drop > 0.0) {
    const ExcursionRecord cycle{time_, time_, 0.0, drop, local_time_, true};
    ++opened_;
    if (on_open) on_open(cycle);
    if (on_close) on_close(cycle);
  }
}

void ExcursionTracker::close(double end, double drop) {
  current_.end = end;
  current_.terminal_drop = drop;
  current_.complete = true;
  in_excursion_ = false;
  reflected_ = 0.0;
  if (on_close) on_close(current_);
}

std::optional<ExcursionRecord> ExcursionTracker::truncate() {
  if (!in_excursion_) return std::nullopt;
  ExcursionRecord r = current_;
  r.end = time_;
  r.complete = false;
  return r;
}

ExcursionDecomposition decompose_excursions(const EventPath& path) {
  ExcursionTracker tracker(path.slope);
  ExcursionDecomposition out;
  out.ladder_epochs.push_back(0.0);
  tracker.on_close = [&](const ExcursionRecord& r) {
    out.ladder_epochs.push_back(r.end);
    if (r.height > 0.0) out.excursions.push_back(r);
  };
  for (const auto& e : path.events) {
    tracker.advance(e.time - tracker.time());
    tracker.jump(e.jump);
  }
  tracker.advance(path.horizon - tracker.time());
  if (auto open = tracker.truncate()) out.excursions.push_back(*open);
  out.local_time = tracker.local_time();
  return out;
}

}  // namespace levylab::sim
