#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "corpuskit/core.hpp"

namespace corpuskit::pipeline {

struct StageConfig {
    std::string name;                             // filter | dedup | pack
    std::map<std::string, std::string> params;
};

// Plain-text pipeline config:
//   seed = 42
//   input = corpus.jsonl
//   output_dir = out
//   stage filter profile=nanonets
//   stage dedup threshold=0.65
//   stage pack context_length=128 strategy=paragraph
struct PipelineConfig {
    std::filesystem::path input;
    std::filesystem::path output_dir;
    std::uint64_t seed = 0;
    std::vector<StageConfig> stages;

    static PipelineConfig load(const std::filesystem::path& path);
    static PipelineConfig parse(const std::string& content);

    // Total validation; never touches data. Throws ConfigError.
    void validate() const;
};

// Executes the stages in order, writing each stage's output and report under
// output_dir (NN_<stage>.jsonl / NN_<stage>_report.json). Partial outputs are
// removed when a stage fails. Identical config + inputs + seed produce
// byte-identical outputs.
void run(const PipelineConfig& config);

struct CorpusStats {
    std::string name;
    std::uint64_t tokens = 0;
    std::uint64_t documents = 0;
};

// Token/document counts per corpus file. Packed-example files (records with
// token_ids) are counted by stored length; document records through the
// tokenizer.
std::vector<CorpusStats> stats(const std::vector<std::filesystem::path>& corpora,
                               const TokenizerInterface& tokenizer);

std::string format_stats_table(const std::vector<CorpusStats>& rows);

}  // namespace corpuskit::pipeline
