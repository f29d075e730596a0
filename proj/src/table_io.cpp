#include "crc/table_io.hpp"

#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <vector>

#include "json.hpp"

namespace crc {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double parse_count(std::string_view text, std::string_view history) {
  const std::string s(trim(text));
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (s.empty() || used != s.size()) {
    throw TableFormatError("count for history " + std::string(history) + " is not a number: '" + s + "'");
  }
  if (!std::isfinite(value) || value < 0.0 || value != std::floor(value)) {
    throw TableFormatError("count for history " + std::string(history) +
                           " must be a nonnegative integer: '" + s + "'");
  }
  return value;
}

// Collects (history, count) pairs and turns them into a table, checking
// for the all-zero history, duplicates, and missing histories.
class TableBuilder {
 public:
  void add(std::string_view history, double count) {
    const CaptureHistory h = [&] {
      try {
        return CaptureHistory::parse(trim(history));
      } catch (const std::invalid_argument& e) {
        throw TableFormatError(e.what());
      }
    }();
    if (!streams_) {
      streams_ = h.streams();
      counts_.assign((std::size_t{1} << *streams_) - 1, 0.0);
      seen_.assign(counts_.size(), false);
    } else if (h.streams() != *streams_) {
      throw TableFormatError("history '" + h.to_string() + "' has " + std::to_string(h.streams()) +
                             " streams, expected " + std::to_string(*streams_));
    }
    if (h.never_captured()) {
      throw TableFormatError("the all-zero history '" + h.to_string() + "' cannot be observed");
    }
    const std::size_t j = h.lex_index();
    if (seen_[j]) throw TableFormatError("duplicate history '" + h.to_string() + "'");
    seen_[j] = true;
    counts_[j] = count;
  }

  void expect_streams(int streams) {
    if (streams_ && *streams_ != streams) {
      throw TableFormatError("declared " + std::to_string(streams) +
                             " streams but histories have " + std::to_string(*streams_));
    }
    if (!streams_) {
      streams_ = streams;
      counts_.assign((std::size_t{1} << streams) - 1, 0.0);
      seen_.assign(counts_.size(), false);
    }
  }

  FrequencyTable build() const {
    if (!streams_) throw TableFormatError("table has no rows");
    for (std::size_t j = 0; j < seen_.size(); ++j) {
      if (!seen_[j]) {
        throw TableFormatError("missing observed history '" + history_at(*streams_, j).to_string() + "'");
      }
    }
    return FrequencyTable(*streams_, counts_);
  }

 private:
  std::optional<int> streams_;
  std::vector<double> counts_;
  std::vector<bool> seen_;
};

std::string format_count(double c) {
  std::ostringstream os;
  os.precision(17);
  os << c;
  return os.str();
}

}  // namespace

FrequencyTable parse_table_csv(std::string_view text) {
  TableBuilder builder;
  bool header_seen = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = std::min(text.find('\n', pos), text.size());
    const std::string_view line = trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string_view::npos || line.find(',', comma + 1) != std::string_view::npos) {
      throw TableFormatError("line " + std::to_string(line_no) + ": expected two comma-separated fields");
    }
    const auto first = trim(line.substr(0, comma));
    const auto second = trim(line.substr(comma + 1));
    if (!header_seen) {
      if (first != "history" || second != "count") {
        throw TableFormatError("CSV header must be 'history,count'");
      }
      header_seen = true;
      continue;
    }
    builder.add(first, parse_count(second, first));
  }
  if (!header_seen) throw TableFormatError("empty table file");
  return builder.build();
}

FrequencyTable parse_table_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw TableFormatError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("counts") || !doc["counts"].is_object()) {
    throw TableFormatError("JSON table needs a \"counts\" object");
  }
  TableBuilder builder;
  for (const auto& [history, value] : doc["counts"].items()) {
    if (!value.is_number()) throw TableFormatError("count for history " + history + " is not a number");
    const double c = value.get<double>();
    if (c < 0.0 || c != std::floor(c)) {
      throw TableFormatError("count for history " + history + " must be a nonnegative integer");
    }
    builder.add(history, c);
  }
  if (doc.contains("streams")) {
    if (!doc["streams"].is_number_integer()) throw TableFormatError("\"streams\" must be an integer");
    builder.expect_streams(doc["streams"].get<int>());
  }
  return builder.build();
}

FrequencyTable read_table_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw TableFormatError("cannot open table file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  bool json = path.extension() == ".json";
  if (path.extension() != ".json" && path.extension() != ".csv") {
    const auto body = trim(text);
    json = !body.empty() && body.front() == '{';
  }
  return json ? parse_table_json(text) : parse_table_csv(text);
}

std::string table_to_csv(const FrequencyTable& table) {
  std::string out = "history,count\n";
  for (std::size_t j = 0; j < table.cell_count(); ++j) {
    out += history_at(table.streams(), j).to_string() + "," + format_count(table[j]) + "\n";
  }
  return out;
}

std::string table_to_json(const FrequencyTable& table) {
  // Keep histories in lexicographic order rather than key order.
  nlohmann::ordered_json doc;
  doc["streams"] = table.streams();
  doc["counts"] = nlohmann::ordered_json::object();
  for (std::size_t j = 0; j < table.cell_count(); ++j) {
    const double c = table[j];
    const std::string key = history_at(table.streams(), j).to_string();
    if (c == std::floor(c) && c < 9.0e15) {
      doc["counts"][key] = static_cast<std::int64_t>(c);
    } else {
      doc["counts"][key] = c;
    }
  }
  return doc.dump(2) + "\n";
}

}  // namespace crc
