#include <doctest.h>

#include "corpuskit/align.hpp"
#include "test_util.hpp"

using namespace corpuskit;
using namespace corpuskit::align;

namespace {

ParallelPair pair_of(const std::string& src_text, const std::string& tgt_text) {
    return ParallelPair{{"en1", src_text, "en", {}}, {"sl1", tgt_text, "sl", {}}, "p1"};
}

}  // namespace

TEST_SUITE_BEGIN("align");

TEST_CASE("interleave alternates paragraphs") {
    auto out = interleave_paragraphs(pair_of("A\n\nB", "X\n\nY"));
    CHECK(out.text == "A\n\nX\n\nB\n\nY");
    CHECK(out.meta.at("mode") == "paragraph");
    CHECK(out.meta.at("src_id") == "en1");
    CHECK(out.meta.at("tgt_id") == "sl1");
}

TEST_CASE("interleave single paragraph") {
    CHECK(interleave_paragraphs(pair_of("A", "X")).text == "A\n\nX");
}

TEST_CASE("paragraph count mismatch names both counts") {
    try {
        interleave_paragraphs(pair_of("A\n\nB", "X\n\nY\n\nZ"));
        FAIL("expected DataError");
    } catch (const DataError& e) {
        std::string what = e.what();
        CHECK(what.find("2") != std::string::npos);
        CHECK(what.find("3") != std::string::npos);
    }
}

TEST_CASE("interleave parity recovers both sources") {
    std::mt19937_64 rng(67);
    for (int i = 0; i < 50; ++i) {
        int n = 1 + static_cast<int>(rng() % 5);
        std::string src, tgt;
        for (int p = 0; p < n; ++p) {
            if (p > 0) {
                src += "\n\n";
                tgt += "\n\n";
            }
            src += testutil::random_paragraph(rng);
            tgt += testutil::random_paragraph(rng);
        }
        auto out = interleave_paragraphs(pair_of(src, tgt));
        std::vector<std::string> parts;
        std::string_view view(out.text);
        std::size_t start = 0;
        while (true) {
            std::size_t pos = view.find("\n\n", start);
            if (pos == std::string_view::npos) break;
            parts.emplace_back(view.substr(start, pos - start));
            start = pos + 2;
        }
        parts.emplace_back(view.substr(start));
        REQUIRE(parts.size() == static_cast<std::size_t>(2 * n));
        std::string src_back, tgt_back;
        for (std::size_t p = 0; p < parts.size(); ++p) {
            std::string& side = (p % 2 == 0) ? src_back : tgt_back;
            if (!side.empty()) side += "\n\n";
            side += parts[p];
        }
        CHECK(src_back == src);
        CHECK(tgt_back == tgt);
    }
}

TEST_CASE("concat orders and blank-line joiner") {
    auto pair = pair_of("Hello", "Pozdrav");
    CHECK(concat_documents(pair, ConcatOrder::src_first).text == "Hello\n\nPozdrav");
    CHECK(concat_documents(pair, ConcatOrder::tgt_first).text == "Pozdrav\n\nHello");
    CHECK(concat_documents(pair, ConcatOrder::src_first).meta.at("mode") == "document");
}

TEST_CASE("concat flags an empty side") {
    auto pair = pair_of("Hello", "");
    auto out = concat_documents(pair, ConcatOrder::src_first);
    CHECK(out.text == "Hello\n\n");
    CHECK(out.meta.at("empty_side") == "tgt");
}

TEST_CASE("emit_separate passes documents through with pair id") {
    auto pair = pair_of("one", "ena");
    pair.pair_id = "p7";
    auto [src, tgt] = emit_separate(pair);
    CHECK(src.id == "en1");
    CHECK(tgt.id == "sl1");
    CHECK(src.text == "one");
    CHECK(tgt.text == "ena");
    CHECK(src.meta.at("pair_id") == "p7");
    CHECK(tgt.meta.at("pair_id") == "p7");
}

TEST_CASE("pair invariants are enforced") {
    ParallelPair same_lang{{"a", "x", "sl", {}}, {"b", "y", "sl", {}}, "p"};
    CHECK_THROWS_AS(validate(same_lang), DataError);
    ParallelPair no_id{{"a", "x", "en", {}}, {"b", "y", "sl", {}}, ""};
    CHECK_THROWS_AS(validate(no_id), DataError);
}

TEST_CASE("no characters are added or lost beyond joiners") {
    auto pair = pair_of("abc\n\ndef", "uvw\n\nxyz");
    auto inter = interleave_paragraphs(pair);
    std::size_t joiner_chars = 2 * 3;  // three "\n\n" joiners
    CHECK(inter.text.size() == pair.src.text.size() + pair.tgt.text.size() -
                                   2 * 2 + joiner_chars);
    auto cat = concat_documents(pair, ConcatOrder::src_first);
    CHECK(cat.text.size() == pair.src.text.size() + pair.tgt.text.size() + 2);
}

TEST_SUITE_END();
