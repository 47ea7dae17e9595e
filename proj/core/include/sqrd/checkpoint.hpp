// Durable progress for z-range sweeps. The file is JSONL: a header line
// binding the canonical config and tool version, one record per completed z
// holding that z's hits and scan count, and a final completion marker.
// Loading re-validates every stored hit through classify_point, so a resumed
// run can only ever reproduce what a fresh run would have produced.
#pragma once

#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "sqrd/int128.hpp"
#include "sqrd/lattice.hpp"

namespace sqrd {

struct CheckpointError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CheckpointState {
  bool fresh = true;     // no usable header: start from scratch
  bool complete = false;  // the stored sweep already finished
  std::int64_t last_z = 0;
  std::vector<PointProfile> hits3;
  std::vector<PointProfile> hits4;
  Int128 points_scanned = 0;
  std::vector<std::string> warnings;
};

/// Reads a checkpoint written under the same canonical config and version.
/// A truncated final line is dropped with a warning; corruption anywhere
/// else, a config mismatch, or a failed hit re-validation refuses the resume
/// with the byte offset of the offending record.
CheckpointState load_checkpoint(const std::string& path,
                                const std::string& canonical_config);

class CheckpointWriter {
 public:
  /// resume = false truncates the file and writes a fresh header;
  /// resume = true appends after the existing records.
  CheckpointWriter(const std::string& path, const std::string& canonical_config,
                   bool resume);

  void z_done(std::int64_t z, const std::vector<PointProfile>& hits3,
              const std::vector<PointProfile>& hits4, Int128 scanned);
  void complete();

 private:
  std::ofstream out_;
};

}  // namespace sqrd
