#ifndef CRC_CAPTURE_HPP
#define CRC_CAPTURE_HPP

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace crc {

// Streams are numbered 1..K in user-facing text and 0..K-1 internally.
inline constexpr int kMinStreams = 2;
inline constexpr int kMaxStreams = 16;

// A capture pattern across K streams.  Bit k of the mask is set when the
// case was identified by stream k+1, so "101" has mask 0b101 and "110"
// has mask 0b011.
class CaptureHistory {
 public:
  CaptureHistory(int streams, std::uint32_t mask);

  // Parses a K-character bit string such as "110".
  static CaptureHistory parse(std::string_view bits);

  int streams() const { return streams_; }
  std::uint32_t mask() const { return mask_; }
  bool captured(int stream_index) const { return (mask_ >> stream_index) & 1u; }
  bool never_captured() const { return mask_ == 0; }

  // Position in the lexicographic listing where (1,...,1) is 0 and
  // (0,...,0) is 2^K - 1.
  std::size_t lex_index() const;

  std::string to_string() const;

  friend bool operator==(const CaptureHistory&, const CaptureHistory&) = default;

 private:
  int streams_;
  std::uint32_t mask_;
};

// All 2^K histories, (1,...,1) first and (0,...,0) last.
std::vector<CaptureHistory> lex_histories(int streams);

CaptureHistory history_at(int streams, std::size_t lex_index);

// Observed cell counts for the 2^K - 1 histories with at least one capture.
// Counts are stored in lexicographic order; the all-zero cell has no slot.
// Values are real so expected-cell tables can pass through the same
// estimators as observed data.
class FrequencyTable {
 public:
  FrequencyTable(int streams, std::vector<double> counts);

  int streams() const { return streams_; }
  std::size_t cell_count() const { return counts_.size(); }
  std::span<const double> counts() const { return counts_; }

  double count(const CaptureHistory& h) const;
  double count(std::string_view bits) const { return count(CaptureHistory::parse(bits)); }
  double operator[](std::size_t lex_index) const { return counts_.at(lex_index); }

  // Count of cases seen only by the last stream, n_{0...01}.
  double last_stream_only() const { return counts_.back(); }

  // Copy of this table with stream `stream` (1-based) moved to the last
  // position; the remaining streams keep their relative order.
  FrequencyTable with_last_stream(int stream) const;

  friend bool operator==(const FrequencyTable&, const FrequencyTable&) = default;

 private:
  int streams_;
  std::vector<double> counts_;
};

// Number of cases captured at least once.
double n_captured(const FrequencyTable& table);

}  // namespace crc

#endif  // CRC_CAPTURE_HPP
