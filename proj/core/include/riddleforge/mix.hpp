#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "riddleforge/rng.hpp"

namespace riddleforge {

enum class RecordOrigin { caption, riddle };

std::string_view origin_name(RecordOrigin origin);

struct ImageTextRecord {
  std::string image_id;
  std::string text;
  RecordOrigin origin = RecordOrigin::caption;

  friend bool operator==(const ImageTextRecord&, const ImageTextRecord&) = default;
};

/// Linear curriculum for the riddle share p over training steps.
struct MixSchedule {
  double p_start = 0.5;
  double p_end = 0.1;
  std::int64_t total_steps = 1;

  void validate() const;
};

/// p(t) = p_start + (p_end - p_start) * t / total_steps, clamped to [0, 1].
/// Throws StepOutOfRange unless 0 <= step <= total_steps.
double schedule_p(const MixSchedule& schedule, std::int64_t step);

/// Endless reader over a fixed record pool. Each pass visits every record
/// once in an order reshuffled per pass from (seed, pass number).
class RecordCycler {
 public:
  RecordCycler(std::vector<ImageTextRecord> records, std::uint64_t seed);

  const ImageTextRecord& next();
  bool empty() const { return records_.empty(); }
  std::size_t size() const { return records_.size(); }
  std::uint64_t passes_started() const { return pass_; }

 private:
  void reshuffle();

  std::vector<ImageTextRecord> records_;
  std::vector<std::size_t> order_;
  std::uint64_t seed_;
  std::uint64_t pass_ = 0;
  std::size_t cursor_ = 0;
};

// Residual state carried between batches.
struct MixCarry {
  double residual = 0.0;
};

/// Number of riddle records in the next batch: residual += p * batch_size,
/// k = floor(residual), residual -= k.
std::size_t riddle_quota(std::size_t batch_size, double p, MixCarry& carry);

/// One batch of `batch_size` records, riddle_quota() of them riddles, in an
/// order shuffled by `rng`. Throws InvalidArgument on p outside [0, 1], a
/// zero batch size, or an empty source that is needed.
std::vector<ImageTextRecord> compose_batch(RecordCycler& captions, RecordCycler& riddles,
                                           std::size_t batch_size, double p, MixCarry& carry,
                                           Rng& rng);

}  // namespace riddleforge
