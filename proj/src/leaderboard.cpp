#include "corpuskit/leaderboard.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

namespace corpuskit::leaderboard {

Outcome outcome_from_string(std::string_view name) {
    if (name == "a_wins") return Outcome::a_wins;
    if (name == "b_wins") return Outcome::b_wins;
    if (name == "tie") return Outcome::tie;
    if (name == "both_bad") return Outcome::both_bad;
    throw DataError("unknown vote outcome '" + std::string(name) + "'");
}

std::string_view to_string(Outcome outcome) {
    switch (outcome) {
        case Outcome::a_wins: return "a_wins";
        case Outcome::b_wins: return "b_wins";
        case Outcome::tie: return "tie";
        case Outcome::both_bad: return "both_bad";
    }
    return "?";
}

VoteRecord parse_vote(std::string_view line) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
        throw DataError(std::string("vote record parse error: ") + e.what());
    }
    VoteRecord vote;
    try {
        vote.model_a = j.at("model_a").get<std::string>();
        vote.model_b = j.at("model_b").get<std::string>();
        vote.outcome = outcome_from_string(j.at("outcome").get<std::string>());
        vote.timestamp = j.value("timestamp", std::int64_t{0});
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("vote record parse error: ") + e.what());
    }
    if (vote.model_a.empty() || vote.model_b.empty())
        throw DataError("vote record: empty model name");
    return vote;
}

std::string serialize_vote(const VoteRecord& vote) {
    nlohmann::json j;
    j["model_a"] = vote.model_a;
    j["model_b"] = vote.model_b;
    j["outcome"] = std::string(to_string(vote.outcome));
    j["timestamp"] = vote.timestamp;
    return j.dump();
}

void elo_update(RatingTable& table, const VoteRecord& vote) {
    if (vote.model_a == vote.model_b)
        throw DataError("invalid vote: model '" + vote.model_a + "' paired with itself");
    auto rating_of = [&](const std::string& model) -> double& {
        auto [it, inserted] = table.ratings.try_emplace(model, table.initial);
        (void)inserted;
        return it->second;
    };
    double& ra = rating_of(vote.model_a);
    double& rb = rating_of(vote.model_b);

    double expected_a = 1.0 / (1.0 + std::pow(10.0, (rb - ra) / 400.0));
    double score_a;
    switch (vote.outcome) {
        case Outcome::a_wins: score_a = 1.0; break;
        case Outcome::b_wins: score_a = 0.0; break;
        default: score_a = 0.5; break;  // tie and both_bad
    }
    double delta = table.k_factor * (score_a - expected_a);
    ra += delta;
    rb -= delta;

    ModelCounts& ca = table.counts[vote.model_a];
    ModelCounts& cb = table.counts[vote.model_b];
    ++ca.total;
    ++cb.total;
    switch (vote.outcome) {
        case Outcome::a_wins: ++ca.wins; ++cb.losses; break;
        case Outcome::b_wins: ++ca.losses; ++cb.wins; break;
        case Outcome::tie: ++ca.ties; ++cb.ties; break;
        case Outcome::both_bad: ++ca.both_bad; ++cb.both_bad; break;
    }
}

std::vector<LeaderboardRow> compute_leaderboard(std::vector<VoteRecord> votes, double k_factor,
                                                double initial) {
    if (k_factor <= 0.0) throw ConfigError("leaderboard: k_factor must be positive");
    std::stable_sort(votes.begin(), votes.end(),
                     [](const VoteRecord& a, const VoteRecord& b) {
                         return a.timestamp < b.timestamp;
                     });
    RatingTable table;
    table.k_factor = k_factor;
    table.initial = initial;
    for (const auto& vote : votes) elo_update(table, vote);

    std::vector<LeaderboardRow> rows;
    rows.reserve(table.ratings.size());
    for (const auto& [model, rating] : table.ratings) {
        const ModelCounts& c = table.counts[model];
        LeaderboardRow row;
        row.model = model;
        row.rating = rating;
        row.total_votes = c.total;
        if (c.wins + c.losses > 0)
            row.win_rate = static_cast<double>(c.wins) / static_cast<double>(c.wins + c.losses);
        rows.push_back(std::move(row));
    }
    std::sort(rows.begin(), rows.end(), [](const LeaderboardRow& a, const LeaderboardRow& b) {
        if (a.rating != b.rating) return a.rating > b.rating;
        return a.model < b.model;
    });
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i].rank = i + 1;
    return rows;
}

std::string format_leaderboard(const std::vector<LeaderboardRow>& rows) {
    std::ostringstream out;
    char buf[160];
    std::snprintf(buf, sizeof buf, "%4s  %-32s  %9s  %8s  %11s", "Rank", "Model", "ELO Score",
                  "Win Rate", "Total Votes");
    out << buf << '\n';
    for (const auto& row : rows) {
        std::string win = "—";  // undefined when wins + losses == 0
        if (row.win_rate) {
            char pct[16];
            std::snprintf(pct, sizeof pct, "%.1f%%", 100.0 * *row.win_rate);
            win = pct;
        }
        std::snprintf(buf, sizeof buf, "%4zu  %-32s  %9.0f  %8s  %11zu", row.rank,
                      row.model.c_str(), row.rating, win.c_str(), row.total_votes);
        out << buf << '\n';
    }
    return out.str();
}

void ScoreMatrix::validate() const {
    if (benchmarks.empty() || models.empty())
        throw DataError("score matrix: empty benchmark or model list");
    if (scores.size() != benchmarks.size())
        throw DataError("score matrix: row count does not match benchmark count");
    for (std::size_t r = 0; r < scores.size(); ++r) {
        if (scores[r].size() != models.size())
            throw DataError("score matrix: row '" + benchmarks[r] + "' has " +
                            std::to_string(scores[r].size()) + " scores, expected " +
                            std::to_string(models.size()));
    }
}

namespace {

char detect_delimiter(const std::string& header) {
    for (char c : {'\t', ';', ','}) {
        if (header.find(c) != std::string::npos) return c;
    }
    throw DataError("score matrix: header row has no delimiter");
}

std::vector<std::string> split_row(const std::string& line, char delim) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = line.find(delim, start);
        std::string cell = line.substr(start, pos == std::string::npos ? pos : pos - start);
        // trim surrounding whitespace
        while (!cell.empty() && std::isspace(static_cast<unsigned char>(cell.front())))
            cell.erase(cell.begin());
        while (!cell.empty() && std::isspace(static_cast<unsigned char>(cell.back())))
            cell.pop_back();
        cells.push_back(std::move(cell));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return cells;
}

}  // namespace

ScoreMatrix parse_score_matrix(const std::string& content) {
    std::istringstream in(content);
    std::string line;
    ScoreMatrix matrix;
    bool header_seen = false;
    char delim = ',';
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            delim = detect_delimiter(line);
            auto cells = split_row(line, delim);
            if (cells.size() < 2) throw DataError("score matrix: header needs model columns");
            matrix.models.assign(cells.begin() + 1, cells.end());
            header_seen = true;
            continue;
        }
        auto cells = split_row(line, delim);
        if (cells.empty() || cells[0].empty()) continue;
        matrix.benchmarks.push_back(cells[0]);
        std::vector<double> row;
        for (std::size_t i = 1; i < cells.size(); ++i) {
            try {
                row.push_back(std::stod(cells[i]));
            } catch (const std::exception&) {
                throw DataError("score matrix: '" + cells[i] + "' in row '" + cells[0] +
                                "' is not a number");
            }
        }
        matrix.scores.push_back(std::move(row));
    }
    matrix.validate();
    return matrix;
}

TieRule tie_rule_from_string(std::string_view name) {
    if (name == "fractional") return TieRule::fractional;
    if (name == "competition") return TieRule::competition;
    throw ConfigError("unknown tie rule '" + std::string(name) + "'");
}

std::vector<RankRow> average_rank(const ScoreMatrix& matrix, TieRule tie_rule) {
    matrix.validate();
    const std::size_t n = matrix.models.size();
    std::vector<double> totals(n, 0.0);

    for (const auto& row : matrix.scores) {
        std::vector<std::size_t> order(n);
        for (std::size_t i = 0; i < n; ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return row[a] > row[b]; });
        std::size_t i = 0;
        while (i < n) {
            std::size_t j = i;
            while (j + 1 < n && row[order[j + 1]] == row[order[i]]) ++j;
            double rank;
            if (tie_rule == TieRule::fractional) {
                rank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
            } else {
                rank = static_cast<double>(i + 1);
            }
            for (std::size_t k = i; k <= j; ++k) totals[order[k]] += rank;
            i = j + 1;
        }
    }

    std::vector<RankRow> rows;
    rows.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        rows.push_back({matrix.models[i],
                        totals[i] / static_cast<double>(matrix.benchmarks.size())});
    }
    std::sort(rows.begin(), rows.end(), [](const RankRow& a, const RankRow& b) {
        if (a.average_rank != b.average_rank) return a.average_rank < b.average_rank;
        return a.model < b.model;
    });
    return rows;
}

std::string format_ranking(const std::vector<RankRow>& rows) {
    std::ostringstream out;
    char buf[128];
    std::snprintf(buf, sizeof buf, "%-32s  %12s", "Model", "Average rank");
    out << buf << '\n';
    for (const auto& row : rows) {
        std::snprintf(buf, sizeof buf, "%-32s  %12.2f", row.model.c_str(), row.average_rank);
        out << buf << '\n';
    }
    return out.str();
}

}  // namespace corpuskit::leaderboard
