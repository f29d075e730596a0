#include "crc/capture.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace crc {

namespace {

void check_streams(int streams) {
  if (streams < kMinStreams || streams > kMaxStreams) {
    throw std::invalid_argument("stream count must be between " + std::to_string(kMinStreams) +
                                " and " + std::to_string(kMaxStreams) + ", got " +
                                std::to_string(streams));
  }
}

std::size_t cell_total(int streams) { return std::size_t{1} << streams; }

}  // namespace

CaptureHistory::CaptureHistory(int streams, std::uint32_t mask) : streams_(streams), mask_(mask) {
  check_streams(streams);
  if (mask >= cell_total(streams)) {
    throw std::invalid_argument("capture mask has bits beyond stream " + std::to_string(streams));
  }
}

CaptureHistory CaptureHistory::parse(std::string_view bits) {
  const int streams = static_cast<int>(bits.size());
  check_streams(streams);
  std::uint32_t mask = 0;
  for (int k = 0; k < streams; ++k) {
    if (bits[k] == '1') {
      mask |= 1u << k;
    } else if (bits[k] != '0') {
      throw std::invalid_argument("capture history must be a 0/1 string: '" + std::string(bits) + "'");
    }
  }
  return CaptureHistory(streams, mask);
}

std::size_t CaptureHistory::lex_index() const {
  // Read the bit string with stream 1 as the most significant digit.
  std::size_t value = 0;
  for (int k = 0; k < streams_; ++k) value = (value << 1) | (captured(k) ? 1u : 0u);
  return cell_total(streams_) - 1 - value;
}

std::string CaptureHistory::to_string() const {
  std::string s(static_cast<std::size_t>(streams_), '0');
  for (int k = 0; k < streams_; ++k) {
    if (captured(k)) s[k] = '1';
  }
  return s;
}

CaptureHistory history_at(int streams, std::size_t lex_index) {
  check_streams(streams);
  const std::size_t total = cell_total(streams);
  if (lex_index >= total) throw std::out_of_range("history index out of range");
  const std::size_t value = total - 1 - lex_index;
  std::uint32_t mask = 0;
  for (int k = 0; k < streams; ++k) {
    if ((value >> (streams - 1 - k)) & 1u) mask |= 1u << k;
  }
  return CaptureHistory(streams, mask);
}

std::vector<CaptureHistory> lex_histories(int streams) {
  check_streams(streams);
  std::vector<CaptureHistory> out;
  out.reserve(cell_total(streams));
  for (std::size_t j = 0; j < cell_total(streams); ++j) out.push_back(history_at(streams, j));
  return out;
}

FrequencyTable::FrequencyTable(int streams, std::vector<double> counts)
    : streams_(streams), counts_(std::move(counts)) {
  check_streams(streams);
  if (counts_.size() != cell_total(streams) - 1) {
    throw std::invalid_argument("a " + std::to_string(streams) + "-stream table needs " +
                                std::to_string(cell_total(streams) - 1) + " observed cells, got " +
                                std::to_string(counts_.size()));
  }
  for (double c : counts_) {
    if (!(c >= 0.0) || !std::isfinite(c)) {
      throw std::invalid_argument("cell counts must be finite and nonnegative");
    }
  }
}

double FrequencyTable::count(const CaptureHistory& h) const {
  if (h.streams() != streams_) throw std::invalid_argument("history length does not match table");
  if (h.never_captured()) throw std::invalid_argument("the all-zero cell is not observed");
  return counts_[h.lex_index()];
}

FrequencyTable FrequencyTable::with_last_stream(int stream) const {
  if (stream < 1 || stream > streams_) {
    throw std::invalid_argument("stream index must be in 1.." + std::to_string(streams_));
  }
  const int moved = stream - 1;
  // order[new position] = old stream index
  std::vector<int> order;
  for (int k = 0; k < streams_; ++k) {
    if (k != moved) order.push_back(k);
  }
  order.push_back(moved);

  std::vector<double> relabeled(counts_.size());
  for (std::size_t j = 0; j < counts_.size(); ++j) {
    const CaptureHistory old_h = history_at(streams_, j);
    std::uint32_t mask = 0;
    for (int k = 0; k < streams_; ++k) {
      if (old_h.captured(order[k])) mask |= 1u << k;
    }
    relabeled[CaptureHistory(streams_, mask).lex_index()] = counts_[j];
  }
  return FrequencyTable(streams_, std::move(relabeled));
}

double n_captured(const FrequencyTable& table) {
  const auto c = table.counts();
  return std::accumulate(c.begin(), c.end(), 0.0);
}

}  // namespace crc
