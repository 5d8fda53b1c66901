#include "corpuskit/pipeline.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "corpuskit/dedup.hpp"
#include "corpuskit/filters.hpp"
#include "corpuskit/packer.hpp"

namespace corpuskit::pipeline {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<std::string> split_ws(std::string_view s) {
    std::vector<std::string> parts;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        std::size_t start = i;
        while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        if (i > start) parts.emplace_back(s.substr(start, i - start));
    }
    return parts;
}

std::uint64_t parse_u64(const std::string& value, const std::string& what) {
    try {
        return std::stoull(value);
    } catch (const std::exception&) {
        throw ConfigError(what + " '" + value + "' is not a nonnegative integer");
    }
}

double parse_double(const std::string& value, const std::string& what) {
    try {
        return std::stod(value);
    } catch (const std::exception&) {
        throw ConfigError(what + " '" + value + "' is not a number");
    }
}

filters::FilterPipeline build_filter_pipeline(const StageConfig& stage) {
    std::vector<std::string> names;
    if (auto it = stage.params.find("filters"); it != stage.params.end()) {
        std::stringstream ss(it->second);
        std::string name;
        while (std::getline(ss, name, ',')) {
            if (!name.empty()) names.push_back(name);
        }
    } else {
        names = filters::FilterPipeline::default_order();
    }
    if (auto it = stage.params.find("profile"); it != stage.params.end()) {
        if (it->second == "nanonets") {
            names.push_back("filter_long_paragraphs");
            names.push_back("collapse_repeated_paragraphs");
        } else {
            throw ConfigError("unknown filter profile '" + it->second + "'");
        }
    }
    std::vector<filters::FilterSpec> specs;
    for (const auto& name : names) {
        filters::FilterSpec spec{name, {}};
        if (name == "filter_long_paragraphs") {
            if (auto p = stage.params.find("max_chars"); p != stage.params.end())
                spec.params["max_chars"] = p->second;
        } else if (name == "collapse_repeated_paragraphs") {
            if (auto p = stage.params.find("max_repeats"); p != stage.params.end())
                spec.params["max_repeats"] = p->second;
        } else if (name == "reformat_unicode") {
            if (auto p = stage.params.find("map_file"); p != stage.params.end())
                spec.params["map_file"] = p->second;
        }
        specs.push_back(std::move(spec));
    }
    return filters::FilterPipeline::from_specs(specs);
}

dedup::DedupOptions build_dedup_options(const StageConfig& stage, std::uint64_t global_seed) {
    dedup::DedupOptions options;
    options.seed = global_seed;
    for (const auto& [key, value] : stage.params) {
        if (key == "threshold") {
            options.threshold = parse_double(value, "dedup threshold");
        } else if (key == "ngram") {
            options.ngram = static_cast<std::size_t>(parse_u64(value, "dedup ngram"));
        } else if (key == "seed") {
            options.seed = parse_u64(value, "dedup seed");
        } else if (key == "group_by") {
            options.group_by = value;
        } else {
            throw ConfigError("dedup stage: unknown parameter '" + key + "'");
        }
    }
    if (options.threshold <= 0.0 || options.threshold >= 1.0)
        throw ConfigError("dedup threshold must lie strictly between 0 and 1");
    if (options.ngram == 0) throw ConfigError("dedup ngram must be at least 1");
    return options;
}

struct PackParams {
    std::size_t context_length = 4096;
    UnitKind strategy = UnitKind::paragraph;
    std::string tokenizer = "reference";
};

PackParams build_pack_params(const StageConfig& stage) {
    PackParams params;
    for (const auto& [key, value] : stage.params) {
        if (key == "context_length") {
            params.context_length = static_cast<std::size_t>(parse_u64(value, "context_length"));
        } else if (key == "strategy") {
            params.strategy = unit_kind_from_string(value);
        } else if (key == "tokenizer") {
            params.tokenizer = value;
        } else {
            throw ConfigError("pack stage: unknown parameter '" + key + "'");
        }
    }
    if (params.context_length < 8) throw ConfigError("context_length must be at least 8");
    if (params.tokenizer != "reference" && params.tokenizer.rfind("external:", 0) != 0)
        throw ConfigError("unknown tokenizer spec '" + params.tokenizer + "'");
    return params;
}

}  // namespace

PipelineConfig PipelineConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

PipelineConfig PipelineConfig::parse(const std::string& content) {
    PipelineConfig config;
    std::istringstream in(content);
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        auto fail = [&](const std::string& why) {
            throw ConfigError("config line " + std::to_string(line_no) + ": " + why);
        };
        if (line.rfind("stage", 0) == 0 &&
            (line.size() == 5 || std::isspace(static_cast<unsigned char>(line[5])))) {
            auto parts = split_ws(line.substr(5));
            if (parts.empty()) fail("stage line missing a stage name");
            StageConfig stage;
            stage.name = parts[0];
            for (std::size_t i = 1; i < parts.size(); ++i) {
                std::size_t eq = parts[i].find('=');
                if (eq == std::string::npos) fail("stage parameter '" + parts[i] +
                                                  "' is not key=value");
                stage.params[parts[i].substr(0, eq)] = parts[i].substr(eq + 1);
            }
            config.stages.push_back(std::move(stage));
            continue;
        }
        std::size_t eq = line.find('=');
        if (eq == std::string_view::npos) fail("expected 'key = value' or 'stage ...'");
        std::string key(trim(line.substr(0, eq)));
        std::string value(trim(line.substr(eq + 1)));
        if (key == "input") {
            config.input = value;
        } else if (key == "output_dir") {
            config.output_dir = value;
        } else if (key == "seed") {
            config.seed = parse_u64(value, "seed");
        } else {
            fail("unknown key '" + key + "'");
        }
    }
    return config;
}

void PipelineConfig::validate() const {
    if (input.empty()) throw ConfigError("pipeline config: missing input");
    if (output_dir.empty()) throw ConfigError("pipeline config: missing output_dir");
    if (stages.empty()) throw ConfigError("pipeline config: no stages");
    for (std::size_t i = 0; i < stages.size(); ++i) {
        const StageConfig& stage = stages[i];
        if (stage.name == "filter") {
            build_filter_pipeline(stage);
        } else if (stage.name == "dedup") {
            build_dedup_options(stage, seed);
        } else if (stage.name == "pack") {
            build_pack_params(stage);
            if (i + 1 != stages.size())
                throw ConfigError("pack must be the last stage (it emits packed examples)");
        } else {
            throw ConfigError("unknown stage '" + stage.name + "'");
        }
    }
}

namespace {

class OutputTracker {
  public:
    std::filesystem::path track(std::filesystem::path path) {
        created_.push_back(path);
        return path;
    }
    void discard_all() {
        for (const auto& path : created_) {
            std::error_code ec;
            std::filesystem::remove(path, ec);
        }
    }
    void commit() { created_.clear(); }
    ~OutputTracker() { discard_all(); }

  private:
    std::vector<std::filesystem::path> created_;
};

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << content;
    if (!out) throw IoError("write failed on " + path.string());
}

}  // namespace

void run(const PipelineConfig& config) {
    config.validate();

    std::error_code ec;
    std::filesystem::create_directories(config.output_dir, ec);
    if (ec) throw IoError("cannot create output directory " + config.output_dir.string());

    std::vector<Document> docs = read_records(config.input);
    OutputTracker outputs;

    for (std::size_t i = 0; i < config.stages.size(); ++i) {
        const StageConfig& stage = config.stages[i];
        char prefix[16];
        std::snprintf(prefix, sizeof prefix, "%02zu_", i + 1);
        auto out_path = [&](const std::string& suffix) {
            return outputs.track(config.output_dir / (prefix + stage.name + suffix));
        };

        if (stage.name == "filter") {
            auto pipeline = build_filter_pipeline(stage);
            filters::FilterReport report;
            std::vector<Document> next;
            next.reserve(docs.size());
            for (const auto& doc : docs) next.push_back(pipeline.apply(doc, report));
            docs = std::move(next);
            write_records(out_path(".jsonl"), docs);
            write_text_file(out_path("_report.json"), report.to_json() + "\n");
        } else if (stage.name == "dedup") {
            auto options = build_dedup_options(stage, config.seed);
            dedup::DedupReport report;
            docs = dedup::dedup_corpus(docs, options, &report);
            write_records(out_path(".jsonl"), docs);
            std::ostringstream removed;
            for (const auto& pair : report.removed) {
                nlohmann::json j;
                j["kept_id"] = pair.kept_id;
                j["removed_id"] = pair.removed_id;
                j["estimate"] = pair.estimate;
                removed << j.dump() << '\n';
            }
            write_text_file(out_path("_removed.jsonl"), removed.str());
            nlohmann::json summary;
            summary["docs_in"] = report.docs_in;
            summary["docs_kept"] = report.docs_kept;
            summary["docs_removed"] = report.removed.size();
            summary["ungrouped"] = report.ungrouped;
            write_text_file(out_path("_report.json"), summary.dump() + "\n");
        } else {  // pack
            auto params = build_pack_params(stage);
            auto tokenizer = make_tokenizer(params.tokenizer);
            std::vector<packer::Subdocument> subdocs;
            for (const auto& doc : docs) {
                auto subs = packer::make_subdocuments(doc, params.context_length, *tokenizer,
                                                    params.strategy);
                for (auto& sub : subs) subdocs.push_back(std::move(sub));
            }
            auto examples = packer::pack(std::move(subdocs), params.context_length, *tokenizer);
            auto report = packer::verify_pack(examples, docs, *tokenizer, params.context_length);
            if (!report.ok())
                throw DataError("pack stage: verification reported " +
                                std::to_string(report.violations.size()) + " violations");
            std::ostringstream out;
            for (const auto& ex : examples) out << packer::serialize_example(ex) << '\n';
            write_text_file(out_path(".jsonl"), out.str());
            nlohmann::json summary;
            summary["documents"] = docs.size();
            summary["examples"] = examples.size();
            summary["tokens"] = examples.size() * params.context_length;
            summary["context_length"] = params.context_length;
            write_text_file(out_path("_report.json"), summary.dump() + "\n");
        }
    }
    outputs.commit();
}

std::vector<CorpusStats> stats(const std::vector<std::filesystem::path>& corpora,
                               const TokenizerInterface& tokenizer) {
    std::vector<CorpusStats> rows;
    for (const auto& path : corpora) {
        std::ifstream in(path);
        if (!in) throw IoError("cannot open " + path.string());
        CorpusStats row;
        row.name = path.filename().string();
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty()) continue;
            nlohmann::json j;
            try {
                j = nlohmann::json::parse(line);
            } catch (const nlohmann::json::parse_error& e) {
                throw DataError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
            }
            if (j.contains("token_ids")) {
                row.tokens += j["token_ids"].size();
            } else {
                Document doc = parse_record(line);
                row.tokens += tokenizer.encode(doc.text).size();
            }
            row.documents += 1;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string format_stats_table(const std::vector<CorpusStats>& rows) {
    std::uint64_t total_tokens = 0;
    std::uint64_t total_docs = 0;
    for (const auto& row : rows) {
        total_tokens += row.tokens;
        total_docs += row.documents;
    }
    std::ostringstream out;
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-28s  %16s  %19s  %16s", "Corpus", "Number of tokens",
                  "Number of documents", "Total percentage");
    out << buf << '\n';
    for (const auto& row : rows) {
        double pct = total_tokens == 0
                         ? 0.0
                         : 100.0 * static_cast<double>(row.tokens) /
                               static_cast<double>(total_tokens);
        std::snprintf(buf, sizeof buf, "%-28s  %16llu  %19llu  %15.1f%%", row.name.c_str(),
                      static_cast<unsigned long long>(row.tokens),
                      static_cast<unsigned long long>(row.documents), pct);
        out << buf << '\n';
    }
    std::snprintf(buf, sizeof buf, "%-28s  %16llu  %19llu  %16s", "Total",
                  static_cast<unsigned long long>(total_tokens),
                  static_cast<unsigned long long>(total_docs), "");
    out << buf << '\n';
    return out.str();
}

}  // namespace corpuskit::pipeline
