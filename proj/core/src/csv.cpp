#include "echograph/csv.hpp"

#include "echograph/errors.hpp"

#include <charconv>
#include <istream>
#include <ostream>

namespace echograph {

std::vector<std::string> csv_split(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool in_quotes = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                cur.push_back(c);
            }
        } else if (c == '"') {
            in_quotes = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (in_quotes) throw ParseError("unterminated quote in CSV record: " + line);
    fields.push_back(std::move(cur));
    return fields;
}

bool csv_read_record(std::istream& in, std::vector<std::string>& fields, std::size_t& line_no) {
    std::string line;
    if (!std::getline(in, line)) return false;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    // A record may span lines when a quoted field contains a newline.
    auto open_quote = [](const std::string& s) {
        bool open = false;
        for (std::size_t i = 0; i < s.size(); ++i)
            if (s[i] == '"') open = !open;
        return open;
    };
    while (open_quote(line)) {
        std::string next;
        if (!std::getline(in, next)) throw ParseError("unterminated quote at end of CSV input");
        ++line_no;
        if (!next.empty() && next.back() == '\r') next.pop_back();
        line.push_back('\n');
        line.append(next);
    }
    fields = csv_split(line);
    return true;
}

std::string csv_escape(const std::string& field) {
    const bool needs_quotes = field.find_first_of(",\"\n\r") != std::string::npos;
    if (!needs_quotes) return field;
    std::string out = "\"";
    for (const char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

void csv_write_record(std::ostream& out, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out.put(',');
        out << csv_escape(fields[i]);
    }
    out.put('\n');
}

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) throw Error("double formatting failed");
    return std::string(buf, ptr);
}

} // namespace echograph
