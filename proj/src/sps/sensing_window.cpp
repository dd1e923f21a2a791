#include "cv2x/sps/sensing_window.hpp"

#include <stdexcept>

namespace cv2x::sps {

SensingWindow::SensingWindow(int span, int subchannels)
    : span_(span),
      subchannels_(subchannels),
      tags_(static_cast<std::size_t>(span), -1),
      states_(static_cast<std::size_t>(span), SlotState::absent),
      srssi_(static_cast<std::size_t>(span) * static_cast<std::size_t>(subchannels), 0.0) {
  if (span <= 0 || subchannels <= 0) throw std::invalid_argument("SensingWindow: span and subchannels must be positive");
}

void SensingWindow::admit(SubframeIndex n) {
  if (n < 0) throw std::invalid_argument("SensingWindow: negative subframe");
  if (newest_ && n < *newest_) throw std::invalid_argument("SensingWindow: out-of-order observation");
  if (newest_ && n == *newest_) {
    while (!reservations_.empty() && reservations_.back().subframe == n) reservations_.pop_back();
  }
  newest_ = n;
  const SubframeIndex oldest = n - span_ + 1;
  while (!reservations_.empty() && reservations_.front().subframe < oldest) reservations_.pop_front();
  tags_[row(n)] = n;
}

void SensingWindow::record(SubframeIndex n, std::span<const double> srssi_dbm,
                           std::span<const channel::DecodedReservation> decoded) {
  if (srssi_dbm.size() != static_cast<std::size_t>(subchannels_))
    throw std::invalid_argument("SensingWindow: S-RSSI vector size must equal subchannel count");
  admit(n);
  states_[row(n)] = SlotState::sensed;
  std::copy(srssi_dbm.begin(), srssi_dbm.end(),
            srssi_.begin() + static_cast<std::ptrdiff_t>(row(n) * static_cast<std::size_t>(subchannels_)));
  for (const auto& d : decoded) {
    if (d.subchannel < 0 || d.subchannel >= subchannels_)
      throw std::invalid_argument("SensingWindow: decoded reservation subchannel out of range");
    reservations_.push_back({n, d.subchannel, d.source, d.rsrp_dbm, d.period_ms});
  }
}

void SensingWindow::record_unsensed(SubframeIndex n) {
  admit(n);
  states_[row(n)] = SlotState::unsensed;
}

void SensingWindow::record(const channel::RxMeasurement& m) {
  if (m.sensed) {
    record(m.subframe, m.srssi_dbm, m.decoded);
  } else {
    record_unsensed(m.subframe);
  }
}

bool SensingWindow::covers(SubframeIndex m) const {
  return newest_ && m >= 0 && m <= *newest_ && m > *newest_ - span_;
}

SlotState SensingWindow::state(SubframeIndex m) const {
  if (!covers(m) || tags_[row(m)] != m) return SlotState::absent;
  return states_[row(m)];
}

std::size_t SensingWindow::size() const {
  if (!newest_) return 0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < tags_.size(); ++i) {
    if (tags_[i] >= 0 && covers(tags_[i])) ++count;
  }
  return count;
}

}  // namespace cv2x::sps
