#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "eot/simulator.hpp"
#include "eot/types.hpp"

namespace eot {

inline constexpr int kRecordSchemaVersion = 1;

/// A parsed frame record stream: header + frames (with optional ground truth).
struct RecordStream {
  SensorMount mount;
  double frame_rate = 14.0;
  std::vector<Frame> frames;
  std::vector<FrameTruth> truths;  // parallel to frames; empty labels if absent
  bool has_truth = false;
};

/// Writes the stream header line: {"type":"header",...}.
void write_header_record(std::ostream& os, const SensorMount& mount, double frame_rate);

/// One line per point/ego/truth record of the frame.
void write_frame_records(std::ostream& os, const SimFrame& sim, bool include_truth);

/// Parses a line-delimited record stream. Ego states are matched to frames by
/// nearest timestamp within max_ego_skew (seconds); parse errors and missing
/// ego data raise std::runtime_error with the offending line number.
RecordStream read_records(std::istream& is, double max_ego_skew = 0.010);

}  // namespace eot
