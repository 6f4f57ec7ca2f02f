#include "echograph/dataset_io.hpp"

#include "echograph/csv.hpp"
#include "echograph/errors.hpp"
#include "echograph/timestamp.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

namespace echograph {

namespace {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::int64_t timestamp_from_json(const json& j, const char* field) {
    if (!j.contains(field)) throw ParseError(std::string("missing field '") + field + "'");
    const auto& v = j.at(field);
    if (v.is_number_integer()) return v.get<std::int64_t>();
    if (v.is_string()) return parse_iso8601(v.get<std::string>());
    throw ParseError(std::string("field '") + field + "' must be UTC seconds or ISO-8601");
}

std::string string_from_json(const json& j, const char* field) {
    if (!j.contains(field) || !j.at(field).is_string())
        throw ParseError(std::string("missing or non-string field '") + field + "'");
    return j.at(field).get<std::string>();
}

std::optional<double> sentiment_from_json(const json& j) {
    if (!j.contains("sentiment") || j.at("sentiment").is_null()) return std::nullopt;
    if (!j.at("sentiment").is_number()) throw ParseError("field 'sentiment' must be a number");
    const double s = j.at("sentiment").get<double>();
    if (s < -1.0 || s > 1.0) throw ParseError("sentiment outside [-1,1]");
    return s;
}

void parse_record(const json& j, InteractionDataset& d) {
    const std::string type = string_from_json(j, "type");
    if (type == "page") {
        Page p;
        p.id = string_from_json(j, "page_id");
        if (j.contains("name")) p.name = j.at("name").get<std::string>();
        if (j.contains("engaged")) {
            if (!j.at("engaged").is_boolean()) throw ParseError("field 'engaged' must be boolean");
            p.engaged = j.at("engaged").get<bool>();
        }
        d.pages.push_back(std::move(p));
    } else if (type == "post") {
        Post p;
        p.id = string_from_json(j, "post_id");
        p.page_id = string_from_json(j, "page_id");
        p.timestamp = timestamp_from_json(j, "timestamp");
        if (j.contains("text") && !j.at("text").is_null())
            p.text = j.at("text").get<std::string>();
        p.sentiment = sentiment_from_json(j);
        if (j.contains("concepts")) {
            if (!j.at("concepts").is_array()) throw ParseError("field 'concepts' must be an array");
            for (const auto& c : j.at("concepts")) p.concepts.push_back(c.get<std::string>());
        }
        d.posts.push_back(std::move(p));
    } else if (type == "like" || type == "comment") {
        Interaction i;
        i.user_id = string_from_json(j, "user_id");
        i.post_id = string_from_json(j, "post_id");
        i.kind = type == "like" ? InteractionKind::like : InteractionKind::comment;
        i.timestamp = timestamp_from_json(j, "timestamp");
        if (i.kind == InteractionKind::comment) i.sentiment = sentiment_from_json(j);
        else if (j.contains("sentiment") && !j.at("sentiment").is_null())
            throw ParseError("likes cannot carry a sentiment score");
        d.interactions.push_back(std::move(i));
    } else {
        throw ParseError("unknown record type '" + type + "'");
    }
}

void dedup_interactions(IngestResult& r) {
    std::set<std::tuple<std::string, std::string, int, std::int64_t>> seen;
    std::vector<Interaction> kept;
    kept.reserve(r.dataset.interactions.size());
    for (auto& i : r.dataset.interactions) {
        if (seen.emplace(i.user_id, i.post_id, static_cast<int>(i.kind), i.timestamp).second)
            kept.push_back(std::move(i));
        else
            ++r.duplicates_dropped;
    }
    r.dataset.interactions = std::move(kept);
}

bool parse_bool_field(const std::string& v, const std::string& file, std::size_t line) {
    std::string s = v;
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    if (s == "true" || s == "1" || s == "y" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "n" || s == "no" || s.empty()) return false;
    throw ParseError(file + ":" + std::to_string(line) + ": bad boolean '" + v + "'");
}

std::vector<std::string> split_concepts(const std::string& joined) {
    std::vector<std::string> out;
    std::string cur;
    for (const char c : joined) {
        if (c == ';') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

// Maps required header names to column indices; extra columns are ignored.
std::vector<std::size_t> resolve_header(const std::vector<std::string>& header,
                                        const std::vector<std::string>& required,
                                        const std::string& file) {
    std::vector<std::size_t> idx;
    for (const auto& name : required) {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end())
            throw ParseError(file + ": missing required column '" + name + "'");
        idx.push_back(static_cast<std::size_t>(it - header.begin()));
    }
    return idx;
}

using RowHandler = void (*)(const std::vector<std::string>&, const std::vector<std::size_t>&,
                            std::size_t, InteractionDataset&);

void ingest_csv_file(const std::filesystem::path& path, const std::vector<std::string>& columns,
                     RowHandler handler, IngestResult& result) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path.string() + "'");
    const std::string label = path.filename().string();
    std::size_t line_no = 0;
    std::vector<std::string> fields;
    if (!csv_read_record(in, fields, line_no))
        throw ParseError(label + ": empty file, header row is mandatory");
    const auto idx = resolve_header(fields, columns, label);
    while (csv_read_record(in, fields, line_no)) {
        if (fields.size() == 1 && fields[0].empty()) continue;
        try {
            if (fields.size() < *std::max_element(idx.begin(), idx.end()) + 1)
                throw ParseError("wrong field count");
            handler(fields, idx, line_no, result.dataset);
        } catch (const ParseError& e) {
            result.rejected.push_back({label, line_no, e.what()});
        }
    }
}

} // namespace

DataFormat parse_data_format(const std::string& name) {
    if (name == "jsonl") return DataFormat::jsonl;
    if (name == "csv") return DataFormat::csv;
    throw ParameterError("unknown data format '" + name + "' (expected jsonl or csv)");
}

IngestResult ingest_jsonl(std::istream& in, const std::string& source_label) {
    IngestResult result;
    result.dataset.provenance = source_label;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        try {
            const json j = json::parse(line);
            if (!j.is_object()) throw ParseError("record is not a JSON object");
            parse_record(j, result.dataset);
        } catch (const json::exception& e) {
            result.rejected.push_back({source_label, line_no, e.what()});
        } catch (const ParseError& e) {
            result.rejected.push_back({source_label, line_no, e.what()});
        }
    }
    dedup_interactions(result);
    result.dataset.validate();
    return result;
}

IngestResult ingest_jsonl_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path.string() + "'");
    return ingest_jsonl(in, path.string());
}

IngestResult ingest_csv_dir(const std::filesystem::path& dir) {
    IngestResult result;
    result.dataset.provenance = dir.string();

    ingest_csv_file(
        dir / "pages.csv", {"page_id", "name", "engaged"},
        [](const std::vector<std::string>& f, const std::vector<std::size_t>& ix, std::size_t ln,
           InteractionDataset& d) {
            Page p;
            p.id = f[ix[0]];
            p.name = f[ix[1]];
            p.engaged = parse_bool_field(f[ix[2]], "pages.csv", ln);
            if (p.id.empty()) throw ParseError("empty page_id");
            d.pages.push_back(std::move(p));
        },
        result);

    ingest_csv_file(
        dir / "posts.csv", {"post_id", "page_id", "timestamp", "text", "sentiment", "concepts"},
        [](const std::vector<std::string>& f, const std::vector<std::size_t>& ix, std::size_t,
           InteractionDataset& d) {
            Post p;
            p.id = f[ix[0]];
            p.page_id = f[ix[1]];
            p.timestamp = parse_iso8601(f[ix[2]]);
            if (!f[ix[3]].empty()) p.text = f[ix[3]];
            if (!f[ix[4]].empty()) {
                const double s = std::stod(f[ix[4]]);
                if (s < -1.0 || s > 1.0) throw ParseError("sentiment outside [-1,1]");
                p.sentiment = s;
            }
            p.concepts = split_concepts(f[ix[5]]);
            if (p.id.empty()) throw ParseError("empty post_id");
            d.posts.push_back(std::move(p));
        },
        result);

    ingest_csv_file(
        dir / "likes.csv", {"user_id", "post_id", "timestamp"},
        [](const std::vector<std::string>& f, const std::vector<std::size_t>& ix, std::size_t,
           InteractionDataset& d) {
            Interaction i;
            i.user_id = f[ix[0]];
            i.post_id = f[ix[1]];
            i.kind = InteractionKind::like;
            i.timestamp = parse_iso8601(f[ix[2]]);
            if (i.user_id.empty()) throw ParseError("empty user_id");
            d.interactions.push_back(std::move(i));
        },
        result);

    ingest_csv_file(
        dir / "comments.csv", {"user_id", "post_id", "timestamp", "sentiment"},
        [](const std::vector<std::string>& f, const std::vector<std::size_t>& ix, std::size_t,
           InteractionDataset& d) {
            Interaction i;
            i.user_id = f[ix[0]];
            i.post_id = f[ix[1]];
            i.kind = InteractionKind::comment;
            i.timestamp = parse_iso8601(f[ix[2]]);
            if (!f[ix[3]].empty()) {
                const double s = std::stod(f[ix[3]]);
                if (s < -1.0 || s > 1.0) throw ParseError("sentiment outside [-1,1]");
                i.sentiment = s;
            }
            if (i.user_id.empty()) throw ParseError("empty user_id");
            d.interactions.push_back(std::move(i));
        },
        result);

    dedup_interactions(result);
    result.dataset.validate();
    return result;
}

IngestResult ingest(const std::filesystem::path& path, DataFormat format) {
    return format == DataFormat::jsonl ? ingest_jsonl_file(path) : ingest_csv_dir(path);
}

void write_jsonl(const InteractionDataset& d, std::ostream& out) {
    for (const auto& p : d.pages) {
        ordered_json j{{"type", "page"}, {"page_id", p.id}, {"name", p.name},
                       {"engaged", p.engaged}};
        out << j.dump() << '\n';
    }
    for (const auto& p : d.posts) {
        ordered_json j{{"type", "post"}, {"post_id", p.id}, {"page_id", p.page_id},
                       {"timestamp", format_iso8601(p.timestamp)}};
        if (p.text) j["text"] = *p.text;
        if (p.sentiment) j["sentiment"] = *p.sentiment;
        if (!p.concepts.empty()) j["concepts"] = p.concepts;
        out << j.dump() << '\n';
    }
    for (const auto& i : d.interactions) {
        ordered_json j{{"type", to_string(i.kind)}, {"user_id", i.user_id},
                       {"post_id", i.post_id}, {"timestamp", format_iso8601(i.timestamp)}};
        if (i.sentiment) j["sentiment"] = *i.sentiment;
        out << j.dump() << '\n';
    }
}

void write_jsonl_file(const InteractionDataset& d, const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    write_jsonl(d, out);
}

void write_csv_dir(const InteractionDataset& d, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    {
        std::ofstream out(dir / "pages.csv");
        csv_write_record(out, {"page_id", "name", "engaged"});
        for (const auto& p : d.pages)
            csv_write_record(out, {p.id, p.name, p.engaged ? "true" : "false"});
    }
    {
        std::ofstream out(dir / "posts.csv");
        csv_write_record(out, {"post_id", "page_id", "timestamp", "text", "sentiment", "concepts"});
        for (const auto& p : d.posts) {
            std::string concepts;
            for (std::size_t i = 0; i < p.concepts.size(); ++i) {
                if (i) concepts.push_back(';');
                concepts += p.concepts[i];
            }
            csv_write_record(out, {p.id, p.page_id, format_iso8601(p.timestamp),
                                   p.text.value_or(""),
                                   p.sentiment ? format_double(*p.sentiment) : "", concepts});
        }
    }
    {
        std::ofstream likes(dir / "likes.csv");
        std::ofstream comments(dir / "comments.csv");
        csv_write_record(likes, {"user_id", "post_id", "timestamp"});
        csv_write_record(comments, {"user_id", "post_id", "timestamp", "sentiment"});
        for (const auto& i : d.interactions) {
            if (i.kind == InteractionKind::like)
                csv_write_record(likes, {i.user_id, i.post_id, format_iso8601(i.timestamp)});
            else
                csv_write_record(comments, {i.user_id, i.post_id, format_iso8601(i.timestamp),
                                            i.sentiment ? format_double(*i.sentiment) : ""});
        }
    }
}

} // namespace echograph
