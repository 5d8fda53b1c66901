#include <doctest.h>

#include "corpuskit/core.hpp"
#include "corpuskit/unicode.hpp"
#include "test_util.hpp"

using namespace corpuskit;

TEST_SUITE_BEGIN("core");

TEST_CASE("parse_record maps fields") {
    Document doc = parse_record(R"({"id":"a1","text":"Pozdrav","lang":"sl"})");
    CHECK(doc.id == "a1");
    CHECK(doc.text == "Pozdrav");
    CHECK(doc.lang == "sl");
    CHECK(doc.meta.empty());
}

TEST_CASE("parse_record rejects empty id") {
    CHECK_THROWS_AS(parse_record(R"({"id":"","text":"x"})"), DataError);
}

TEST_CASE("parse_record defaults lang and meta") {
    Document doc = parse_record(R"({"id":"b2","text":"hi","meta":{"src":"wiki"}})");
    CHECK(doc.lang == "");
    CHECK(doc.meta.at("src") == "wiki");
}

TEST_CASE("parse_record names the offending field") {
    try {
        parse_record(R"({"id":"x","text":42})");
        FAIL("expected DataError");
    } catch (const DataError& e) {
        CHECK(std::string(e.what()).find("'text'") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_record("not json"), DataError);
    CHECK_THROWS_AS(parse_record(R"({"text":"missing id"})"), DataError);
    CHECK_THROWS_AS(parse_record(R"({"id":"x","text":"y","lang":"SLO"})"), DataError);
}

TEST_CASE("serialize_record is a single line and round-trips") {
    Document doc{"a1", "x", "sl", {}};
    std::string line = serialize_record(doc);
    CHECK(line.find('\n') == std::string::npos);
    CHECK(parse_record(line) == doc);

    Document with_newline{"n1", "line1\nline2", "", {}};
    std::string encoded = serialize_record(with_newline);
    CHECK(encoded.find('\n') == std::string::npos);
    CHECK(parse_record(encoded) == with_newline);
}

TEST_CASE("serialize_record emits meta keys in sorted order") {
    Document doc{"m1", "t", "", {{"zeta", "1"}, {"alpha", "2"}, {"mid", "3"}}};
    std::string line = serialize_record(doc);
    auto a = line.find("alpha");
    auto m = line.find("mid");
    auto z = line.find("zeta");
    REQUIRE(a != std::string::npos);
    CHECK(a < m);
    CHECK(m < z);
}

TEST_CASE("serialize_record rejects invalid utf-8") {
    Document doc{"bad", std::string("\xFF\xFE"), "", {}};
    CHECK_THROWS_AS(serialize_record(doc), DataError);
}

TEST_CASE("round-trip property over random documents") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 200; ++i) {
        Document doc;
        doc.id = "doc" + std::to_string(i);
        doc.text = testutil::random_noisy_text(rng);
        doc.lang = (i % 3 == 0) ? "sl" : (i % 3 == 1 ? "en" : "");
        if (i % 2 == 0) doc.meta["k" + std::to_string(i % 5)] = testutil::random_word(rng);
        CHECK(parse_record(serialize_record(doc)) == doc);
    }
}

TEST_CASE("split_units paragraph") {
    Document doc{"d", "A\n\nB", "", {}};
    auto units = split_units(doc, UnitKind::paragraph);
    REQUIRE(units.size() == 2);
    CHECK(units[0].text == "A");
    CHECK(units[0].ordinal == 0);
    CHECK(units[1].text == "B");
    CHECK(units[1].ordinal == 1);
    CHECK(units[0].source_id == "d");
}

TEST_CASE("split_units section splits before headings") {
    Document doc{"d", "# H\nx\n# G\ny", "", {}};
    auto units = split_units(doc, UnitKind::section);
    REQUIRE(units.size() == 2);
    CHECK(units[0].text == "# H\nx");
    CHECK(units[1].text == "# G\ny");
}

TEST_CASE("split_units sentence keeps abbreviations together") {
    Document doc{"d", "Dr. Novak je prišel. Sedel je.", "", {}};
    auto units = split_units(doc, UnitKind::sentence);
    REQUIRE(units.size() == 2);
    CHECK(units[0].text == "Dr. Novak je prišel.");
    CHECK(units[1].text == "Sedel je.");
}

TEST_CASE("split_units empty text yields empty list") {
    Document doc{"d", "", "", {}};
    CHECK(split_units(doc, UnitKind::paragraph).empty());
    CHECK(split_units(doc, UnitKind::sentence).empty());
    CHECK(split_units(doc, UnitKind::section).empty());
}

TEST_CASE("unit reconstruction property") {
    std::mt19937_64 rng(11);
    auto rejoin = [](const std::vector<Unit>& units, UnitKind kind) {
        std::string joined;
        for (std::size_t u = 0; u < units.size(); ++u) {
            if (u > 0) joined += unit_joiner(kind);
            joined += units[u].text;
        }
        return joined;
    };
    for (int i = 0; i < 100; ++i) {
        // paragraph and section joiners are newline-based: multi-paragraph text
        Document doc{"d", testutil::random_text(rng, 1, 6), "", {}};
        for (UnitKind kind : {UnitKind::paragraph, UnitKind::section}) {
            CHECK(rejoin(split_units(doc, kind), kind) == doc.text);
        }
        // sentence joiner is a single space: single-paragraph text
        Document par{"d", testutil::random_paragraph(rng, 2, 6), "", {}};
        CHECK(rejoin(split_units(par, UnitKind::sentence), UnitKind::sentence) == par.text);
    }
}

TEST_CASE("unit round-trip stays exact on unnormalized newlines") {
    Document doc{"d", "A\n\n\n\nB\n\n\nC", "", {}};
    auto units = split_units(doc, UnitKind::paragraph);
    std::string joined;
    for (std::size_t u = 0; u < units.size(); ++u) {
        if (u > 0) joined += unit_joiner(UnitKind::paragraph);
        joined += units[u].text;
    }
    CHECK(joined == doc.text);
}

TEST_CASE("split_units is deterministic") {
    std::mt19937_64 rng(13);
    for (int i = 0; i < 20; ++i) {
        Document doc{"d", testutil::random_noisy_text(rng), "", {}};
        for (UnitKind kind : {UnitKind::paragraph, UnitKind::section, UnitKind::sentence}) {
            auto a = split_units(doc, kind);
            auto b = split_units(doc, kind);
            REQUIRE(a.size() == b.size());
            for (std::size_t u = 0; u < a.size(); ++u) CHECK(a[u].text == b[u].text);
        }
    }
}

TEST_CASE("byte tokenizer round-trips and has distinct sentinels") {
    ByteTokenizer tok;
    CHECK(tok.bos_id() != tok.eos_id());
    CHECK(tok.vocab_size() == 259);
    std::mt19937_64 rng(17);
    for (int i = 0; i < 50; ++i) {
        std::string text = testutil::random_noisy_text(rng);
        auto ids = tok.encode(text);
        CHECK(tok.decode(ids) == text);
    }
    CHECK(tok.encode("").empty());
}

TEST_CASE("word tokenizer loads external vocab") {
    auto path = std::filesystem::temp_directory_path() / "ck_vocab_test.json";
    {
        std::ofstream out(path);
        out << R"({"bos_id":1,"eos_id":2,"unk_id":0,"vocab":{"ena":3,"dva":4,"tri":5}})";
    }
    auto tok = make_tokenizer("external:" + path.string());
    auto ids = tok->encode("ena dva tri");
    CHECK(ids == std::vector<int>{3, 4, 5});
    CHECK(tok->decode(ids) == "ena dva tri");
    CHECK(tok->encode("neznana")[0] == 0);
    std::filesystem::remove(path);
}

TEST_CASE("record reader/writer stream documents") {
    auto path = std::filesystem::temp_directory_path() / "ck_records_test.jsonl";
    std::vector<Document> docs = {
        {"a", "prvi", "sl", {}},
        {"b", "drugi\n\ntretji", "", {{"src", "x"}}},
    };
    write_records(path, docs);
    CHECK(read_records(path) == docs);
    std::filesystem::remove(path);
}

TEST_CASE("unicode helpers") {
    CHECK(uni::codepoint_count("abc") == 3);
    CHECK(uni::codepoint_count("češplja") == 7);  // češplja
    CHECK(uni::is_upper(U'Č'));                        // Č
    CHECK(uni::is_lower(U'č'));                        // č
    CHECK(uni::lowercase("ČEŠ") == "češ");
    CHECK(uni::nfc("č") == "č");  // c + combining caron -> č
}

TEST_SUITE_END();
