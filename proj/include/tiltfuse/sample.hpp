#pragma once

#include <cstdint>
#include <optional>

namespace tiltfuse {

// One frame of uncorrected sensor output.
struct RawSample {
  double t = 0.0;          // s
  double gyro_dps = 0.0;   // deg/s
  double acc_x_mps2 = 0.0;
  double acc_y_mps2 = 0.0;
  std::optional<std::int64_t> enc_count;  // drive encoder pulses this period
  std::optional<std::int64_t> ref_count;  // reference encoder pulses this period

  friend bool operator==(const RawSample&, const RawSample&) = default;
};

}  // namespace tiltfuse
