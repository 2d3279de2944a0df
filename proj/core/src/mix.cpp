#include "riddleforge/mix.hpp"

#include <algorithm>
#include <cmath>

#include "riddleforge/error.hpp"

namespace riddleforge {

std::string_view origin_name(RecordOrigin origin) {
  return origin == RecordOrigin::caption ? "caption" : "riddle";
}

void MixSchedule::validate() const {
  const auto ok = [](double p) { return std::isfinite(p) && p >= 0.0 && p <= 1.0; };
  if (!ok(p_start) || !ok(p_end)) throw InvalidArgument("schedule endpoints must lie in [0, 1]");
  if (total_steps <= 0) throw InvalidArgument("schedule needs total_steps > 0");
}

double schedule_p(const MixSchedule& schedule, std::int64_t step) {
  schedule.validate();
  if (step < 0 || step > schedule.total_steps) {
    throw StepOutOfRange("step " + std::to_string(step) + " outside [0, " +
                         std::to_string(schedule.total_steps) + "]");
  }
  if (step == schedule.total_steps) return schedule.p_end;
  const double t = static_cast<double>(step) / static_cast<double>(schedule.total_steps);
  const double p = schedule.p_start + (schedule.p_end - schedule.p_start) * t;
  return std::clamp(p, 0.0, 1.0);
}

RecordCycler::RecordCycler(std::vector<ImageTextRecord> records, std::uint64_t seed)
    : records_(std::move(records)), order_(records_.size()), seed_(seed) {
  for (std::size_t i = 0; i < order_.size(); ++i) order_[i] = i;
  if (!records_.empty()) reshuffle();
}

void RecordCycler::reshuffle() {
  std::sort(order_.begin(), order_.end());
  Rng rng(derive_seed(seed_, "cycle:" + std::to_string(pass_)));
  rng.shuffle(order_);
  ++pass_;
  cursor_ = 0;
}

const ImageTextRecord& RecordCycler::next() {
  if (records_.empty()) throw InvalidArgument("cannot draw from an empty record source");
  if (cursor_ == order_.size()) reshuffle();
  return records_[order_[cursor_++]];
}

std::size_t riddle_quota(std::size_t batch_size, double p, MixCarry& carry) {
  if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
    throw InvalidArgument("mixing ratio p must lie in [0, 1]");
  }
  if (batch_size == 0) throw InvalidArgument("batch size must be positive");
  carry.residual += p * static_cast<double>(batch_size);
  double k = std::floor(carry.residual + 1e-9);
  k = std::clamp(k, 0.0, static_cast<double>(batch_size));
  carry.residual = std::max(0.0, carry.residual - k);
  return static_cast<std::size_t>(k);
}

std::vector<ImageTextRecord> compose_batch(RecordCycler& captions, RecordCycler& riddles,
                                           std::size_t batch_size, double p, MixCarry& carry,
                                           Rng& rng) {
  MixCarry next = carry;
  const std::size_t k = riddle_quota(batch_size, p, next);
  if (k > 0 && riddles.empty()) throw InvalidArgument("riddle source is empty");
  if (k < batch_size && captions.empty()) throw InvalidArgument("caption source is empty");

  std::vector<ImageTextRecord> batch;
  batch.reserve(batch_size);
  for (std::size_t i = 0; i < k; ++i) batch.push_back(riddles.next());
  for (std::size_t i = k; i < batch_size; ++i) batch.push_back(captions.next());
  rng.shuffle(batch);
  carry = next;
  return batch;
}

}  // namespace riddleforge
