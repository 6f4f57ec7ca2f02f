#include <doctest.h>

#include <echograph/dataset_io.hpp>
#include <echograph/errors.hpp>

#include "helpers.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace echograph;
using namespace testutil;
namespace fs = std::filesystem;

namespace {

// csv directories keep likes and comments in separate files, so read-back
// interleaving differs; timestamps are unique in the fixtures
InteractionDataset by_time(InteractionDataset d) {
    std::sort(d.interactions.begin(), d.interactions.end(),
              [](const Interaction& a, const Interaction& b) { return a.timestamp < b.timestamp; });
    return d;
}

} // namespace

TEST_SUITE("dataset_io") {

TEST_CASE("jsonl stream round-trips a dataset") {
    std::mt19937 gen(21);
    for (int round = 0; round < 5; ++round) {
        auto d = random_dataset(gen);
        d.posts[0].text = "some text, with a comma\nand a newline";
        d.posts[1].concepts = {"brexit", "eu referendum"};
        std::ostringstream out;
        write_jsonl(d, out);
        std::istringstream in(out.str());
        const auto r = ingest_jsonl(in, "roundtrip");
        CHECK(r.rejected.empty());
        CHECK(r.duplicates_dropped == 0);
        CHECK(same_dataset(r.dataset, d));
    }
}

TEST_CASE("csv directory round-trips a dataset") {
    std::mt19937 gen(22);
    auto d = random_dataset(gen);
    d.posts[0].text = "quoted \"text\" here";
    d.posts[1].concepts = {"market", "single market"};
    const auto dir = scratch_dir("csvdir");
    write_csv_dir(d, dir);
    for (const char* name : {"pages.csv", "posts.csv", "likes.csv", "comments.csv"})
        CHECK(fs::exists(dir / name));
    const auto r = ingest_csv_dir(dir);
    CHECK(r.rejected.empty());
    CHECK(same_dataset(by_time(r.dataset), by_time(d)));
    fs::remove_all(dir);
}

TEST_CASE("timestamps accepted as integers or ISO strings") {
    std::istringstream in(R"({"type":"page","page_id":"a","engaged":true}
{"type":"post","post_id":"p","page_id":"a","timestamp":"2016-01-14T10:30:00Z"}
{"type":"like","user_id":"u","post_id":"p","timestamp":1452767400}
)");
    const auto r = ingest_jsonl(in);
    REQUIRE(r.rejected.empty());
    CHECK(r.dataset.posts[0].timestamp == 1452767400);
    CHECK(r.dataset.interactions[0].timestamp == 1452767400);
}

TEST_CASE("malformed lines are rejected with position, good lines survive") {
    std::istringstream in(R"({"type":"page","page_id":"a","engaged":true}
this is not json
{"type":"post","post_id":"p","page_id":"a","timestamp":0}
{"type":"post","post_id":"q","page_id":"a"}
{"type":"mystery","post_id":"x"}
{"type":"like","user_id":"u","post_id":"p","timestamp":5}
)");
    const auto r = ingest_jsonl(in, "mixed");
    CHECK(r.dataset.pages.size() == 1);
    CHECK(r.dataset.posts.size() == 1);
    CHECK(r.dataset.interactions.size() == 1);
    REQUIRE(r.rejected.size() == 3);
    CHECK(r.rejected[0].line == 2);
    CHECK(r.rejected[1].line == 4); // missing timestamp
    CHECK(r.rejected[2].line == 5); // unknown type
    for (const auto& rej : r.rejected) CHECK(rej.source == "mixed");
}

TEST_CASE("duplicate interactions are dropped and counted") {
    std::istringstream in(R"({"type":"page","page_id":"a","engaged":true}
{"type":"post","post_id":"p","page_id":"a","timestamp":0}
{"type":"like","user_id":"u","post_id":"p","timestamp":5}
{"type":"like","user_id":"u","post_id":"p","timestamp":5}
{"type":"like","user_id":"u","post_id":"p","timestamp":6}
)");
    const auto r = ingest_jsonl(in);
    CHECK(r.duplicates_dropped == 1);
    CHECK(r.dataset.interactions.size() == 2); // same tuple at a new timestamp stays
}

TEST_CASE("dangling references fail ingestion outright") {
    std::istringstream in(R"({"type":"page","page_id":"a","engaged":true}
{"type":"like","user_id":"u","post_id":"ghost","timestamp":5}
)");
    CHECK_THROWS_AS(ingest_jsonl(in), IntegrityError);
}

TEST_CASE("likes with sentiment are rejected as records") {
    std::istringstream in(R"({"type":"page","page_id":"a","engaged":true}
{"type":"post","post_id":"p","page_id":"a","timestamp":0}
{"type":"like","user_id":"u","post_id":"p","timestamp":5,"sentiment":0.5}
)");
    const auto r = ingest_jsonl(in);
    CHECK(r.dataset.interactions.empty());
    REQUIRE(r.rejected.size() == 1);
    CHECK(r.rejected[0].line == 3);
}

TEST_CASE("format dispatch and file entry points") {
    CHECK(parse_data_format("jsonl") == DataFormat::jsonl);
    CHECK(parse_data_format("csv") == DataFormat::csv);
    CHECK_THROWS_AS(parse_data_format("xml"), ParameterError);

    std::mt19937 gen(23);
    const auto d = random_dataset(gen);
    const auto dir = scratch_dir("dispatch");
    write_jsonl_file(d, dir / "data.jsonl");
    const auto via_jsonl = ingest(dir / "data.jsonl", DataFormat::jsonl);
    CHECK(same_dataset(via_jsonl.dataset, d));
    write_csv_dir(d, dir / "csv");
    const auto via_csv = ingest(dir / "csv", DataFormat::csv);
    CHECK(same_dataset(by_time(via_csv.dataset), by_time(d)));
    CHECK_THROWS_AS(ingest(dir / "absent.jsonl", DataFormat::jsonl), ParseError);
    fs::remove_all(dir);
}

TEST_CASE("provenance records the input path") {
    std::mt19937 gen(29);
    const auto d = random_dataset(gen);
    const auto dir = scratch_dir("prov");
    write_jsonl_file(d, dir / "data.jsonl");
    const auto r = ingest_jsonl_file(dir / "data.jsonl");
    CHECK(r.dataset.provenance == (dir / "data.jsonl").string());
    fs::remove_all(dir);
}

} // TEST_SUITE
