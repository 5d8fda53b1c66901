#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "corpuskit/align.hpp"
#include "corpuskit/dedup.hpp"
#include "corpuskit/evalmetrics.hpp"
#include "corpuskit/filters.hpp"
#include "corpuskit/leaderboard.hpp"
#include "corpuskit/packer.hpp"
#include "corpuskit/pagemerge.hpp"
#include "corpuskit/pipeline.hpp"

namespace ck = corpuskit;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ck::IoError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw ck::IoError("cannot open " + path + " for writing");
    out << content;
    if (!out) throw ck::IoError("write failed on " + path);
}

struct FilterArgs {
    std::string input, output, report;
    std::string profile, filter_list, map_file;
    std::size_t max_chars = 15000;
    std::size_t max_repeats = 100;
    bool max_chars_set = false, max_repeats_set = false;
};

void run_filter(const FilterArgs& args) {
    std::vector<std::string> names;
    if (!args.filter_list.empty()) {
        std::stringstream ss(args.filter_list);
        std::string name;
        while (std::getline(ss, name, ',')) names.push_back(name);
    } else {
        names = ck::filters::FilterPipeline::default_order();
    }
    if (args.profile == "nanonets") {
        names.push_back("filter_long_paragraphs");
        names.push_back("collapse_repeated_paragraphs");
    } else if (!args.profile.empty()) {
        throw ck::ConfigError("unknown filter profile '" + args.profile + "'");
    }
    std::vector<ck::filters::FilterSpec> specs;
    for (const auto& name : names) {
        ck::filters::FilterSpec spec{name, {}};
        if (name == "filter_long_paragraphs" && args.max_chars_set)
            spec.params["max_chars"] = std::to_string(args.max_chars);
        if (name == "collapse_repeated_paragraphs" && args.max_repeats_set)
            spec.params["max_repeats"] = std::to_string(args.max_repeats);
        if (name == "reformat_unicode" && !args.map_file.empty())
            spec.params["map_file"] = args.map_file;
        specs.push_back(std::move(spec));
    }
    auto pipeline = ck::filters::FilterPipeline::from_specs(specs);

    ck::RecordReader reader(args.input);
    ck::RecordWriter writer(args.output);
    ck::filters::FilterReport report;
    while (auto doc = reader.next()) writer.write(pipeline.apply(*doc, report));
    if (!args.report.empty()) write_file(args.report, report.to_json() + "\n");
    std::cerr << "filter: " << report.docs_in << " documents, "
              << report.paragraphs_removed << " paragraphs removed\n";
}

void run_dedup(const std::string& input, const std::string& output, const std::string& report_path,
               const ck::dedup::DedupOptions& options) {
    ck::RecordReader reader(input);
    ck::RecordWriter writer(output);
    ck::dedup::CorpusDeduper deduper(options);
    while (auto doc = reader.next()) {
        if (deduper.consider(*doc)) writer.write(*doc);
    }
    const auto& report = deduper.report();
    if (!report_path.empty()) {
        std::ostringstream out;
        for (const auto& pair : report.removed) {
            nlohmann::json j;
            j["kept_id"] = pair.kept_id;
            j["removed_id"] = pair.removed_id;
            j["estimate"] = pair.estimate;
            out << j.dump() << '\n';
        }
        write_file(report_path, out.str());
    }
    std::cerr << "dedup: kept " << report.docs_kept << " of " << report.docs_in << " documents";
    if (report.ungrouped > 0) std::cerr << " (" << report.ungrouped << " ungrouped)";
    std::cerr << "\n";
}

void run_pack(const std::string& input, const std::string& output, std::size_t context_length,
              const std::string& strategy, const std::string& tokenizer_spec) {
    auto tokenizer = ck::make_tokenizer(tokenizer_spec);
    ck::UnitKind kind = ck::unit_kind_from_string(strategy);
    auto docs = ck::read_records(input);
    std::vector<ck::packer::Subdocument> subdocs;
    for (const auto& doc : docs) {
        auto subs = ck::packer::make_subdocuments(doc, context_length, *tokenizer, kind);
        for (auto& sub : subs) subdocs.push_back(std::move(sub));
    }
    auto examples = ck::packer::pack(std::move(subdocs), context_length, *tokenizer);
    auto verify = ck::packer::verify_pack(examples, docs, *tokenizer, context_length);
    if (!verify.ok()) {
        for (const auto& v : verify.violations)
            std::cerr << "pack verification: " << v.kind << ": " << v.detail << "\n";
        throw ck::DataError("pack verification failed");
    }
    std::ofstream out(output);
    if (!out) throw ck::IoError("cannot open " + output + " for writing");
    for (const auto& ex : examples) out << ck::packer::serialize_example(ex) << '\n';

    std::vector<ck::pipeline::CorpusStats> rows;
    rows.push_back({"packed", examples.size() * context_length, examples.size()});
    std::cout << ck::pipeline::format_stats_table(rows);
}

ck::align::ParallelPair pair_of(const ck::Document& src, const ck::Document& tgt,
                                  const std::string& pair_id) {
    return ck::align::ParallelPair{src, tgt, pair_id};
}

std::string pair_key(const ck::Document& doc) {
    auto it = doc.meta.find("pair_id");
    return it != doc.meta.end() ? it->second : doc.id;
}

void run_align(const std::string& src_path, const std::string& tgt_path,
               const std::string& pairs_path, const std::string& mode, const std::string& order,
               const std::string& output) {
    std::vector<ck::align::ParallelPair> pairs;
    if (!pairs_path.empty()) {
        std::ifstream in(pairs_path);
        if (!in) throw ck::IoError("cannot open " + pairs_path);
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty()) continue;
            try {
                auto j = nlohmann::json::parse(line);
                ck::align::ParallelPair pair;
                pair.pair_id = j.at("pair_id").get<std::string>();
                pair.src = ck::parse_record(j.at("src").dump());
                pair.tgt = ck::parse_record(j.at("tgt").dump());
                pairs.push_back(std::move(pair));
            } catch (const nlohmann::json::exception& e) {
                throw ck::DataError(pairs_path + ":" + std::to_string(line_no) + ": " + e.what());
            }
        }
    } else {
        auto src_docs = ck::read_records(src_path);
        auto tgt_docs = ck::read_records(tgt_path);
        std::map<std::string, const ck::Document*> tgt_by_key;
        for (const auto& doc : tgt_docs) tgt_by_key[pair_key(doc)] = &doc;
        for (const auto& src : src_docs) {
            auto key = pair_key(src);
            auto it = tgt_by_key.find(key);
            if (it == tgt_by_key.end())
                throw ck::DataError("align: no target document for pair_id '" + key + "'");
            pairs.push_back(pair_of(src, *it->second, key));
        }
    }

    ck::align::ConcatOrder concat_order = order == "tgt_first"
                                              ? ck::align::ConcatOrder::tgt_first
                                              : ck::align::ConcatOrder::src_first;
    ck::RecordWriter writer(output);
    for (const auto& pair : pairs) {
        if (mode == "paragraph") {
            writer.write(ck::align::interleave_paragraphs(pair));
        } else if (mode == "document") {
            writer.write(ck::align::concat_documents(pair, concat_order));
        } else {  // separate
            auto [src, tgt] = ck::align::emit_separate(pair);
            writer.write(src);
            writer.write(tgt);
        }
    }
    std::cerr << "align: " << pairs.size() << " pairs, mode " << mode << "\n";
}

void run_merge_pages(const std::string& input, const std::string& output,
                     const std::string& provider_name, const std::string& replay_file,
                     const std::string& log_path) {
    std::ifstream in(input);
    if (!in) throw ck::IoError("cannot open " + input);
    // page records: {doc_id, page_index, text[, label]}
    std::map<std::string, std::vector<ck::pagemerge::Page>> pages_by_doc;
    std::vector<std::string> doc_order;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            auto j = nlohmann::json::parse(line);
            std::string doc_id = j.at("doc_id").get<std::string>();
            ck::pagemerge::Page page;
            page.index = j.at("page_index").get<std::size_t>();
            page.text = j.at("text").get<std::string>();
            if (j.contains("label")) {
                std::string label = j["label"].get<std::string>();
                if (label == "content") page.label = ck::pagemerge::PageLabel::content;
                else if (label == "boilerplate") page.label = ck::pagemerge::PageLabel::boilerplate;
                else throw ck::DataError("unknown page label '" + label + "'");
            }
            if (!pages_by_doc.count(doc_id)) doc_order.push_back(doc_id);
            pages_by_doc[doc_id].push_back(std::move(page));
        } catch (const nlohmann::json::exception& e) {
            throw ck::DataError(input + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }

    ck::pagemerge::HeuristicProvider heuristic;
    ck::pagemerge::ReplayProvider replay;
    ck::pagemerge::DecisionProvider* provider = &heuristic;
    if (provider_name == "replay") {
        if (replay_file.empty())
            throw ck::ConfigError("merge-pages: --provider replay requires --replay-file");
        replay = ck::pagemerge::ReplayProvider::load(replay_file);
        provider = &replay;
    } else if (provider_name != "heuristic") {
        throw ck::ConfigError("unknown merge provider '" + provider_name + "'");
    }

    ck::RecordWriter writer(output);
    std::ofstream log;
    if (!log_path.empty()) {
        log.open(log_path);
        if (!log) throw ck::IoError("cannot open " + log_path + " for writing");
    }
    for (const auto& doc_id : doc_order) {
        auto& pages = pages_by_doc[doc_id];
        std::stable_sort(pages.begin(), pages.end(),
                         [](const auto& a, const auto& b) { return a.index < b.index; });
        std::vector<ck::pagemerge::MergeLogEntry> entries;
        ck::Document doc = ck::pagemerge::merge_pages(doc_id, pages, *provider, &entries);
        writer.write(doc);
        if (log) {
            for (const auto& entry : entries) {
                nlohmann::json j;
                j["doc_id"] = doc_id;
                j["boundary"] = entry.boundary;
                j["seq"] = entry.step;
                j["action"] = std::string(ck::pagemerge::to_string(entry.action));
                log << j.dump() << '\n';
            }
        }
    }
    std::cerr << "merge-pages: " << doc_order.size() << " documents\n";
}

void run_eval(const std::string& input, const std::string& scores_path,
              const std::string& detector_name, const std::string& target_lang) {
    std::ifstream in(input);
    if (!in) throw ck::IoError("cannot open " + input);
    std::vector<ck::evalmetrics::TranslationPair> pairs;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        pairs.push_back(ck::evalmetrics::parse_translation_record(line));
    }
    if (!scores_path.empty()) {
        std::map<std::string, double> scores;
        std::ifstream score_in(scores_path);
        if (!score_in) throw ck::IoError("cannot open " + scores_path);
        std::size_t line_no = 0;
        while (std::getline(score_in, line)) {
            ++line_no;
            if (line.empty()) continue;
            try {
                auto j = nlohmann::json::parse(line);
                scores[j.at("id").get<std::string>()] = j.at("score").get<double>();
            } catch (const nlohmann::json::exception& e) {
                throw ck::DataError(scores_path + ":" + std::to_string(line_no) + ": " +
                                    e.what());
            }
        }
        for (auto& pair : pairs) {
            if (auto it = scores.find(pair.id); it != scores.end())
                pair.external_scores["score"] = it->second;
        }
    }
    ck::evalmetrics::EvalOptions options;
    ck::evalmetrics::StopwordDetector stopword;
    if (detector_name == "stopword-demo") {
        options.detector = &stopword;
        options.check_language = true;
        options.target_lang = target_lang;
    } else if (detector_name != "none" && !detector_name.empty()) {
        throw ck::ConfigError("unknown language detector '" + detector_name + "'");
    }
    auto report = ck::evalmetrics::eval_translations(pairs, options);
    std::cout << ck::evalmetrics::format_report(report);
}

void run_leaderboard(const std::string& input, double k_factor, double initial) {
    std::ifstream in(input);
    if (!in) throw ck::IoError("cannot open " + input);
    std::vector<ck::leaderboard::VoteRecord> votes;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            votes.push_back(ck::leaderboard::parse_vote(line));
        } catch (const ck::DataError& e) {
            throw ck::DataError(input + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    auto rows = ck::leaderboard::compute_leaderboard(std::move(votes), k_factor, initial);
    std::cout << ck::leaderboard::format_leaderboard(rows);
}

void run_rank(const std::string& input, const std::string& tie_rule) {
    auto matrix = ck::leaderboard::parse_score_matrix(slurp(input));
    auto rows = ck::leaderboard::average_rank(matrix,
                                              ck::leaderboard::tie_rule_from_string(tie_rule));
    std::cout << ck::leaderboard::format_ranking(rows);
}

void run_stats(const std::vector<std::string>& inputs, const std::string& tokenizer_spec) {
    auto tokenizer = ck::make_tokenizer(tokenizer_spec);
    std::vector<std::filesystem::path> paths(inputs.begin(), inputs.end());
    std::cout << ck::pipeline::format_stats_table(ck::pipeline::stats(paths, *tokenizer));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"corpus preparation and evaluation toolkit"};
    app.require_subcommand(1);

    FilterArgs filter_args;
    auto* filter = app.add_subcommand("filter", "run the text-cleaning filters");
    filter->add_option("--input", filter_args.input)->required();
    filter->add_option("--output", filter_args.output)->required();
    filter->add_option("--report", filter_args.report, "filter report path");
    filter->add_option("--profile", filter_args.profile, "nanonets appends artifact filters");
    filter->add_option("--filters", filter_args.filter_list, "comma-separated filter names");
    filter->add_option("--max-chars", filter_args.max_chars)
        ->each([&](const std::string&) { filter_args.max_chars_set = true; });
    filter->add_option("--max-repeats", filter_args.max_repeats)
        ->each([&](const std::string&) { filter_args.max_repeats_set = true; });
    filter->add_option("--map-file", filter_args.map_file, "extra mojibake mappings");

    std::string in_path, out_path, report_path, group_by;
    double threshold = 0.65;
    std::size_t ngram = 5;
    std::uint64_t seed = 0;
    auto* dedup_cmd = app.add_subcommand("dedup", "near-duplicate removal (MinHash LSH)");
    dedup_cmd->add_option("--input", in_path)->required();
    dedup_cmd->add_option("--output", out_path)->required();
    dedup_cmd->add_option("--report", report_path, "removed-pairs report path");
    dedup_cmd->add_option("--threshold", threshold);
    dedup_cmd->add_option("--ngram", ngram);
    dedup_cmd->add_option("--seed", seed);
    dedup_cmd->add_option("--group-by", group_by, "meta key for per-group dedup");

    std::string pack_in, pack_out, strategy = "paragraph", tokenizer_spec = "reference";
    std::size_t context_length = 4096;
    auto* pack_cmd = app.add_subcommand("pack", "split, merge and pack documents");
    pack_cmd->add_option("--input", pack_in)->required();
    pack_cmd->add_option("--output", pack_out)->required();
    pack_cmd->add_option("--context-length", context_length)->required();
    pack_cmd->add_option("--strategy", strategy, "sentence|paragraph|section");
    pack_cmd->add_option("--tokenizer", tokenizer_spec, "reference | external:<vocab.json>");

    std::string src_path, tgt_path, pairs_path, mode = "paragraph", order = "src_first";
    std::string align_out;
    auto* align_cmd = app.add_subcommand("align", "build parallel training documents");
    align_cmd->add_option("--src", src_path);
    align_cmd->add_option("--tgt", tgt_path);
    align_cmd->add_option("--pairs", pairs_path, "pair records (src+tgt per line)");
    align_cmd->add_option("--mode", mode, "paragraph|document|separate");
    align_cmd->add_option("--order", order, "src_first|tgt_first");
    align_cmd->add_option("--output", align_out)->required();

    std::string merge_in, merge_out, provider = "heuristic", replay_file, merge_log;
    auto* merge_cmd = app.add_subcommand("merge-pages", "stitch OCR pages into documents");
    merge_cmd->add_option("--input", merge_in)->required();
    merge_cmd->add_option("--output", merge_out)->required();
    merge_cmd->add_option("--provider", provider, "heuristic|replay");
    merge_cmd->add_option("--replay-file", replay_file);
    merge_cmd->add_option("--log", merge_log, "per-boundary merge log path");

    std::string eval_in, scores_path, detector = "none", target_lang = "sl";
    auto* eval_cmd = app.add_subcommand("eval-translation", "translation QC metrics");
    eval_cmd->add_option("--input", eval_in)->required();
    eval_cmd->add_option("--scores", scores_path, "external score file (id -> score)");
    eval_cmd->add_option("--lang-detector", detector, "none|stopword-demo");
    eval_cmd->add_option("--target-lang", target_lang);

    std::string votes_path;
    double k_factor = 32.0, initial = 1000.0;
    auto* lb_cmd = app.add_subcommand("leaderboard", "arena ELO leaderboard from a vote log");
    lb_cmd->add_option("--input", votes_path)->required();
    lb_cmd->add_option("--k", k_factor);
    lb_cmd->add_option("--initial", initial);

    std::string rank_in, tie_rule = "fractional";
    auto* rank_cmd = app.add_subcommand("rank", "cross-benchmark average-rank leaderboard");
    rank_cmd->add_option("--input", rank_in)->required();
    rank_cmd->add_option("--tie-rule", tie_rule, "fractional|competition");

    std::vector<std::string> stats_inputs;
    std::string stats_tokenizer = "reference";
    auto* stats_cmd = app.add_subcommand("stats", "token/document counts per corpus");
    stats_cmd->add_option("--input", stats_inputs)->required()->expected(-1);
    stats_cmd->add_option("--tokenizer", stats_tokenizer);

    std::string config_path;
    auto* run_cmd = app.add_subcommand("run", "run a configured pipeline");
    run_cmd->add_option("--config", config_path)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;  // validation failure
    }

    try {
        if (filter->parsed()) {
            run_filter(filter_args);
        } else if (dedup_cmd->parsed()) {
            ck::dedup::DedupOptions options;
            options.threshold = threshold;
            options.ngram = ngram;
            options.seed = seed;
            options.group_by = group_by;
            run_dedup(in_path, out_path, report_path, options);
        } else if (pack_cmd->parsed()) {
            run_pack(pack_in, pack_out, context_length, strategy, tokenizer_spec);
        } else if (align_cmd->parsed()) {
            if (pairs_path.empty() && (src_path.empty() || tgt_path.empty()))
                throw ck::ConfigError("align: provide --pairs or both --src and --tgt");
            if (mode != "paragraph" && mode != "document" && mode != "separate")
                throw ck::ConfigError("align: unknown mode '" + mode + "'");
            if (order != "src_first" && order != "tgt_first")
                throw ck::ConfigError("align: unknown order '" + order + "'");
            run_align(src_path, tgt_path, pairs_path, mode, order, align_out);
        } else if (merge_cmd->parsed()) {
            run_merge_pages(merge_in, merge_out, provider, replay_file, merge_log);
        } else if (eval_cmd->parsed()) {
            run_eval(eval_in, scores_path, detector, target_lang);
        } else if (lb_cmd->parsed()) {
            run_leaderboard(votes_path, k_factor, initial);
        } else if (rank_cmd->parsed()) {
            run_rank(rank_in, tie_rule);
        } else if (stats_cmd->parsed()) {
            run_stats(stats_inputs, stats_tokenizer);
        } else if (run_cmd->parsed()) {
            ck::pipeline::run(ck::pipeline::PipelineConfig::load(config_path));
        }
    } catch (const ck::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        switch (e.kind()) {
            case ck::ErrorKind::config: return 1;
            case ck::ErrorKind::data: return 2;
            case ck::ErrorKind::io: return 3;
        }
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
