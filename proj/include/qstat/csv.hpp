#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "qstat/config.hpp"

namespace qstat {

// 17 significant digits, '.' decimal separator, locale independent;
// round-trips every finite double exactly
std::string format_full(double x);

// one CSV line from preformatted cells
std::string csv_line(const std::vector<std::string>& cells);

// complex table serialization: header "a_index,b_index,re,im", 0-based
// indices, rows emitted in the table's storage order. `post_major` marks
// tables stored [b][a] (row = b), so the right index goes in each column.
std::string complex_table_csv(const Matrix& table, bool post_major);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

// FNV-1a, 64 bit; used for output digests in run reports
std::uint64_t fnv1a64(std::string_view data);
std::string hex64(std::uint64_t v);

}  // namespace qstat
