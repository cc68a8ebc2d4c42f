#pragma once

#include <cmath>
#include <cstdint>
#include <cstddef>
#include <string>
#include <vector>

#include "survkit/error.hpp"

namespace survkit {

// Parallel observed-time / event-indicator vectors. time is months from
// surgery to event or censoring; event is 1 for observed distant recurrence.
struct SurvivalData {
  std::vector<double> time;
  std::vector<std::uint8_t> event;

  std::size_t size() const { return time.size(); }

  std::size_t n_events() const {
    std::size_t n = 0;
    for (auto e : event) n += e;
    return n;
  }

  void validate() const {
    require(time.size() == event.size(), ErrKind::invalid,
            "survival data: time/event length mismatch");
    for (std::size_t i = 0; i < time.size(); ++i) {
      require(std::isfinite(time[i]) && time[i] > 0.0, ErrKind::invalid,
              "survival data: time must be positive and finite at index " + std::to_string(i));
      require(event[i] == 0 || event[i] == 1, ErrKind::invalid,
              "survival data: event indicator must be 0 or 1 at index " + std::to_string(i));
    }
  }

  SurvivalData subset(const std::vector<int>& indices) const {
    SurvivalData out;
    out.time.reserve(indices.size());
    out.event.reserve(indices.size());
    for (int i : indices) {
      out.time.push_back(time[static_cast<std::size_t>(i)]);
      out.event.push_back(event[static_cast<std::size_t>(i)]);
    }
    return out;
  }
};

}  // namespace survkit
