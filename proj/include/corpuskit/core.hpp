#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "corpuskit/error.hpp"

namespace corpuskit {

// One text record flowing through every pipeline stage. Serialized as a
// single JSON line with fields `id`, `text`, `lang`, `meta`.
struct Document {
    std::string id;
    std::string text;
    std::string lang;                              // [a-z]{2} or empty
    std::map<std::string, std::string> meta;       // sorted keys, byte-stable output

    bool operator==(const Document&) const = default;
};

// Throws DataError if an invariant is violated (empty id, bad lang tag,
// invalid UTF-8 text).
void validate(const Document& doc);

Document parse_record(std::string_view line);
std::string serialize_record(const Document& doc);

enum class UnitKind { sentence, paragraph, section };

UnitKind unit_kind_from_string(std::string_view name);  // throws ConfigError
std::string_view to_string(UnitKind kind);

struct Unit {
    std::string text;
    UnitKind kind;
    std::string source_id;
    std::size_t ordinal;
};

// Byte range of one unit's text inside the source document (joiners excluded).
struct UnitSpan {
    std::size_t begin;
    std::size_t end;
};

// The constant joiner re-inserted between consecutive units on reconstruction:
// sentence " ", paragraph "\n\n", section "\n".
std::string_view unit_joiner(UnitKind kind);

std::vector<UnitSpan> split_unit_spans(std::string_view text, UnitKind kind);
std::vector<Unit> split_units(const Document& doc, UnitKind kind);

class TokenizerInterface {
  public:
    virtual ~TokenizerInterface() = default;
    virtual std::vector<int> encode(std::string_view text) const = 0;
    virtual std::string decode(std::span<const int> ids) const = 0;
    virtual int bos_id() const = 0;
    virtual int eos_id() const = 0;
    virtual int vocab_size() const = 0;
};

// Reference tokenizer: one token per byte, ids offset by 3. bos=1, eos=2,
// pad-is-eos. Deterministic and language-agnostic; decode(encode(t)) == t.
class ByteTokenizer final : public TokenizerInterface {
  public:
    std::vector<int> encode(std::string_view text) const override;
    std::string decode(std::span<const int> ids) const override;
    int bos_id() const override { return 1; }
    int eos_id() const override { return 2; }
    int vocab_size() const override { return 259; }
};

// Whitespace word-level tokenizer loaded from a JSON vocabulary file:
//   {"bos_id":1,"eos_id":2,"unk_id":0,"vocab":{"word":3,...}}
// The plug-in point for external vocabularies.
class WordTokenizer final : public TokenizerInterface {
  public:
    static WordTokenizer load(const std::filesystem::path& path);

    std::vector<int> encode(std::string_view text) const override;
    std::string decode(std::span<const int> ids) const override;
    int bos_id() const override { return bos_; }
    int eos_id() const override { return eos_; }
    int vocab_size() const override { return vocab_size_; }

  private:
    std::map<std::string, int, std::less<>> vocab_;
    std::map<int, std::string> reverse_;
    int bos_ = 1;
    int eos_ = 2;
    int unk_ = -1;
    int vocab_size_ = 0;
};

// "reference" or "external:<vocab.json>".
std::unique_ptr<TokenizerInterface> make_tokenizer(std::string_view spec);

// Streaming line-record I/O. Readers/writers are single-owner; shard files
// for parallelism instead of sharing handles.
class RecordReader {
  public:
    explicit RecordReader(const std::filesystem::path& path);
    std::optional<Document> next();  // DataError on a malformed line

  private:
    std::ifstream in_;
    std::string path_;
    std::size_t line_no_ = 0;
};

class RecordWriter {
  public:
    explicit RecordWriter(const std::filesystem::path& path);
    void write(const Document& doc);

  private:
    std::ofstream out_;
    std::string path_;
};

std::vector<Document> read_records(const std::filesystem::path& path);
void write_records(const std::filesystem::path& path, const std::vector<Document>& docs);

}  // namespace corpuskit
