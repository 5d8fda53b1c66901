#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "corpuskit/error.hpp"

namespace corpuskit::leaderboard {

enum class Outcome { a_wins, b_wins, tie, both_bad };

Outcome outcome_from_string(std::string_view name);  // throws DataError
std::string_view to_string(Outcome outcome);

struct VoteRecord {
    std::string model_a;
    std::string model_b;
    Outcome outcome = Outcome::tie;
    std::int64_t timestamp = 0;
};

VoteRecord parse_vote(std::string_view line);
std::string serialize_vote(const VoteRecord& vote);

struct ModelCounts {
    std::size_t wins = 0;
    std::size_t losses = 0;
    std::size_t ties = 0;
    std::size_t both_bad = 0;
    std::size_t total = 0;
};

struct RatingTable {
    double k_factor = 32.0;
    double initial = 1000.0;
    std::map<std::string, double> ratings;
    std::map<std::string, ModelCounts> counts;
};

// Standard ELO update: expected_a = 1/(1+10^((Rb-Ra)/400)); both_bad scores
// as a tie. Unseen models start at `initial`. Throws DataError when a vote
// pairs a model with itself.
void elo_update(RatingTable& table, const VoteRecord& vote);

struct LeaderboardRow {
    std::size_t rank = 0;
    std::string model;
    double rating = 0.0;
    std::optional<double> win_rate;  // wins/(wins+losses); empty when undefined
    std::size_t total_votes = 0;
};

// Sequential fold over votes ordered by timestamp (stable-sorted first).
// Rows sorted by rating descending; ties and both_bad are discarded from the
// win rate.
std::vector<LeaderboardRow> compute_leaderboard(std::vector<VoteRecord> votes,
                                                double k_factor = 32.0, double initial = 1000.0);

std::string format_leaderboard(const std::vector<LeaderboardRow>& rows);

struct ScoreMatrix {
    std::vector<std::string> benchmarks;            // row labels (benchmark metric)
    std::vector<std::string> models;                // column labels
    std::vector<std::vector<double>> scores;        // [benchmark][model], higher = better

    void validate() const;  // throws DataError when ragged or empty
};

// Delimited table: header "benchmark,<model>,..."; one row per benchmark
// metric. Comma, semicolon or tab delimited (auto-detected).
ScoreMatrix parse_score_matrix(const std::string& content);

enum class TieRule { fractional, competition };

TieRule tie_rule_from_string(std::string_view name);  // throws ConfigError

struct RankRow {
    std::string model;
    double average_rank = 0.0;
};

// Ranks models 1 (best) .. N (worst) per benchmark row by descending score,
// averages across rows, sorts ascending (lower is better). fractional gives
// tied models the mean of the covered ranks.
std::vector<RankRow> average_rank(const ScoreMatrix& matrix,
                                  TieRule tie_rule = TieRule::fractional);

std::string format_ranking(const std::vector<RankRow>& rows);

}  // namespace corpuskit::leaderboard
