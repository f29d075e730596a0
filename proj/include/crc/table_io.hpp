#ifndef CRC_TABLE_IO_HPP
#define CRC_TABLE_IO_HPP

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "crc/capture.hpp"

namespace crc {

class TableFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// CSV with header `history,count`, one row per observed history.
FrequencyTable parse_table_csv(std::string_view text);
// {"streams": K, "counts": {"110": 23, ...}}
FrequencyTable parse_table_json(std::string_view text);

// Picks the parser from the extension (.json vs anything else), falling
// back to sniffing the first non-blank character.
FrequencyTable read_table_file(const std::filesystem::path& path);

std::string table_to_csv(const FrequencyTable& table);
std::string table_to_json(const FrequencyTable& table);

}  // namespace crc

#endif  // CRC_TABLE_IO_HPP
