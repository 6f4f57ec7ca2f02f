#pragma once

#include "echograph/dataset.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace echograph {

enum class DataFormat { jsonl, csv };

DataFormat parse_data_format(const std::string& name);

/// One rejected input record.
struct IngestDiagnostic {
    std::string source;   // file or stream label
    std::size_t line = 0; // 1-based line within the source
    std::string message;
};

struct IngestResult {
    InteractionDataset dataset;
    std::vector<IngestDiagnostic> rejected;   // malformed records, skipped
    std::size_t duplicates_dropped = 0;       // identical (user,post,kind,ts) tuples
};

/// Line-delimited JSON with a "type" discriminator in
/// {page, post, like, comment}. Malformed lines are rejected and reported;
/// dangling references throw IntegrityError. Timestamps may be ISO-8601
/// strings or integer UTC seconds.
IngestResult ingest_jsonl(std::istream& in, const std::string& source_label = "<stream>");
IngestResult ingest_jsonl_file(const std::filesystem::path& path);

/// Per-type CSV files (pages.csv, posts.csv, likes.csv, comments.csv) in
/// one directory; headers mandatory; ISO-8601 timestamps.
IngestResult ingest_csv_dir(const std::filesystem::path& dir);

/// Dispatch on format. For jsonl `path` is a file; for csv it is the
/// directory holding the four per-type files.
IngestResult ingest(const std::filesystem::path& path, DataFormat format);

void write_jsonl(const InteractionDataset& d, std::ostream& out);
void write_jsonl_file(const InteractionDataset& d, const std::filesystem::path& path);
void write_csv_dir(const InteractionDataset& d, const std::filesystem::path& dir);

} // namespace echograph
