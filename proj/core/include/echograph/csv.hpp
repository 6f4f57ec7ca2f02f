#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace echograph {

/// Minimal RFC-4180 CSV support: quoted fields, embedded commas/quotes/
/// newlines inside quotes, mandatory header row.

/// Splits one physical record into fields. Multi-line quoted fields must
/// already be joined by the reader.
std::vector<std::string> csv_split(const std::string& line);

/// Reads the next record from the stream, joining physical lines while a
/// quote is open. Returns false at end of stream.
bool csv_read_record(std::istream& in, std::vector<std::string>& fields, std::size_t& line_no);

/// Quotes a field if it contains a comma, quote, or newline.
std::string csv_escape(const std::string& field);

void csv_write_record(std::ostream& out, const std::vector<std::string>& fields);

/// Shortest round-trip decimal formatting for output determinism.
std::string format_double(double v);

} // namespace echograph
