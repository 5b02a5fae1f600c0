#pragma once

#include <cstddef>
#include <vector>

namespace specex {

// Mono audio signal, samples in [-1, 1]. Immutable by convention after
// construction; duration is derived, never stored.
struct AudioBuffer {
  std::vector<double> samples;
  int sample_rate = 0;  // Hz, > 0

  double duration_seconds() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
};

}  // namespace specex
