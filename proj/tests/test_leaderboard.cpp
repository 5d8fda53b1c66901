#include <doctest.h>

#include <cmath>
#include <random>

#include "corpuskit/leaderboard.hpp"
#include "table_fixture.hpp"

using namespace corpuskit;
using namespace corpuskit::leaderboard;

namespace {

VoteRecord vote(const std::string& a, const std::string& b, Outcome outcome,
                std::int64_t ts = 0) {
    return VoteRecord{a, b, outcome, ts};
}

}  // namespace

TEST_SUITE_BEGIN("leaderboard");

TEST_CASE("elo symmetric win moves both ratings by K/2") {
    RatingTable table;
    elo_update(table, vote("A", "B", Outcome::a_wins));
    CHECK(table.ratings["A"] == doctest::Approx(1016.0));
    CHECK(table.ratings["B"] == doctest::Approx(984.0));
}

TEST_CASE("elo tie between equals changes nothing") {
    RatingTable table;
    elo_update(table, vote("A", "B", Outcome::tie));
    CHECK(table.ratings["A"] == doctest::Approx(1000.0));
    CHECK(table.ratings["B"] == doctest::Approx(1000.0));
}

TEST_CASE("elo favourite win matches the direct formula") {
    RatingTable table;
    table.ratings["A"] = 1016.0;
    table.ratings["B"] = 1000.0;
    elo_update(table, vote("A", "B", Outcome::a_wins));
    // oracle: expected_a = 1/(1+10^(-16/400)); Ra' = 1016 + 32*(1-expected_a)
    double expected_a = 1.0 / (1.0 + std::pow(10.0, -16.0 / 400.0));
    double oracle = 1016.0 + 32.0 * (1.0 - expected_a);
    CHECK(table.ratings["A"] == doctest::Approx(oracle).epsilon(1e-12));
    CHECK(table.ratings["A"] == doctest::Approx(1031.2636932).epsilon(1e-6));
    CHECK(table.ratings["B"] == doctest::Approx(2016.0 - oracle).epsilon(1e-12));
}

TEST_CASE("elo rejects a self-vote") {
    RatingTable table;
    CHECK_THROWS_AS(elo_update(table, vote("A", "A", Outcome::tie)), DataError);
}

TEST_CASE("both_bad rates like a tie and is excluded from win rate") {
    RatingTable tie_table, bad_table;
    elo_update(tie_table, vote("A", "B", Outcome::tie));
    elo_update(bad_table, vote("A", "B", Outcome::both_bad));
    CHECK(tie_table.ratings["A"] == bad_table.ratings["A"]);
    CHECK(bad_table.counts["A"].both_bad == 1);
    CHECK(bad_table.counts["A"].wins == 0);
}

TEST_CASE("win rate rows: 5W/1L over 6 votes -> 83.3%") {
    std::vector<VoteRecord> votes;
    for (int i = 0; i < 5; ++i) votes.push_back(vote("fav", "other" + std::to_string(i),
                                                     Outcome::a_wins, i));
    votes.push_back(vote("other5", "fav", Outcome::a_wins, 5));
    auto rows = compute_leaderboard(votes);
    const LeaderboardRow* fav = nullptr;
    for (const auto& row : rows) {
        if (row.model == "fav") fav = &row;
    }
    REQUIRE(fav != nullptr);
    CHECK(fav->total_votes == 6);
    REQUIRE(fav->win_rate.has_value());
    char buf[16];
    std::snprintf(buf, sizeof buf, "%.1f%%", 100.0 * *fav->win_rate);
    CHECK(std::string(buf) == "83.3%");
}

TEST_CASE("win rate rows: single win -> 100.0%") {
    auto rows = compute_leaderboard({vote("newcomer", "veteran", Outcome::a_wins)});
    const LeaderboardRow* row = nullptr;
    for (const auto& r : rows) {
        if (r.model == "newcomer") row = &r;
    }
    REQUIRE(row != nullptr);
    CHECK(row->total_votes == 1);
    REQUIRE(row->win_rate.has_value());
    CHECK(*row->win_rate == doctest::Approx(1.0));
}

TEST_CASE("only ties leave the win rate undefined but counted") {
    auto rows = compute_leaderboard({vote("A", "B", Outcome::tie, 0),
                                     vote("A", "B", Outcome::both_bad, 1)});
    for (const auto& row : rows) {
        CHECK(!row.win_rate.has_value());
        CHECK(row.total_votes == 2);
    }
    CHECK(format_leaderboard(rows).find("—") != std::string::npos);
}

TEST_CASE("zero-sum invariant over random vote streams") {
    std::mt19937_64 rng(83);
    std::vector<VoteRecord> votes;
    const int models = 10;
    for (int i = 0; i < 10000; ++i) {
        int a = static_cast<int>(rng() % models);
        int b = static_cast<int>(rng() % models);
        if (a == b) b = (b + 1) % models;
        Outcome outcome = static_cast<Outcome>(rng() % 4);
        votes.push_back(vote("m" + std::to_string(a), "m" + std::to_string(b), outcome, i));
    }
    auto rows = compute_leaderboard(votes);
    double sum = 0.0;
    for (const auto& row : rows) sum += row.rating;
    double expected = 1000.0 * static_cast<double>(rows.size());
    CHECK(std::abs(sum - expected) < 1e-6 * expected);
}

TEST_CASE("adding a tie never changes a model's win rate") {
    std::vector<VoteRecord> votes = {vote("A", "B", Outcome::a_wins, 0),
                                     vote("A", "B", Outcome::b_wins, 1),
                                     vote("A", "B", Outcome::a_wins, 2)};
    auto before = compute_leaderboard(votes);
    votes.push_back(vote("A", "B", Outcome::tie, 3));
    auto after = compute_leaderboard(votes);
    for (const auto& row_before : before) {
        for (const auto& row_after : after) {
            if (row_before.model == row_after.model) {
                REQUIRE(row_before.win_rate.has_value());
                REQUIRE(row_after.win_rate.has_value());
                CHECK(*row_before.win_rate == doctest::Approx(*row_after.win_rate));
            }
        }
    }
}

TEST_CASE("leaderboard is deterministic and respects timestamps") {
    std::vector<VoteRecord> shuffled = {vote("A", "B", Outcome::a_wins, 2),
                                        vote("A", "B", Outcome::b_wins, 1),
                                        vote("A", "C", Outcome::a_wins, 3)};
    auto a = compute_leaderboard(shuffled);
    std::swap(shuffled[0], shuffled[1]);
    auto b = compute_leaderboard(shuffled);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].model == b[i].model);
        CHECK(a[i].rating == doctest::Approx(b[i].rating));
    }
}

TEST_CASE("vote records parse and serialize") {
    auto v = parse_vote(R"({"model_a":"X","model_b":"Y","outcome":"b_wins","timestamp":7})");
    CHECK(v.model_a == "X");
    CHECK(v.outcome == Outcome::b_wins);
    CHECK(v.timestamp == 7);
    CHECK(parse_vote(serialize_vote(v)).model_b == "Y");
    CHECK_THROWS_AS(parse_vote(R"({"model_a":"X","model_b":"Y","outcome":"draw"})"), DataError);
    CHECK_THROWS_AS(parse_vote("{}"), DataError);
}

TEST_CASE("average_rank dominance") {
    ScoreMatrix m;
    m.models = {"X", "Y"};
    m.benchmarks = {"b1", "b2"};
    m.scores = {{0.9, 0.1}, {0.8, 0.2}};
    auto rows = average_rank(m);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].model == "X");
    CHECK(rows[0].average_rank == doctest::Approx(1.0));
    CHECK(rows[1].average_rank == doctest::Approx(2.0));
}

TEST_CASE("fractional ties share the mean of covered ranks") {
    ScoreMatrix m;
    m.models = {"A", "B", "C", "D"};
    m.benchmarks = {"b"};
    m.scores = {{0.9, 0.5, 0.5, 0.1}};  // B and C tie over ranks {2,3}
    auto rows = average_rank(m, TieRule::fractional);
    for (const auto& row : rows) {
        if (row.model == "B" || row.model == "C")
            CHECK(row.average_rank == doctest::Approx(2.5));
    }
    auto comp = average_rank(m, TieRule::competition);
    for (const auto& row : comp) {
        if (row.model == "B" || row.model == "C")
            CHECK(row.average_rank == doctest::Approx(2.0));
    }
}

TEST_CASE("fractional rank sums are N(N+1)/2 per row regardless of ties") {
    std::mt19937_64 rng(89);
    for (int t = 0; t < 50; ++t) {
        ScoreMatrix m;
        int n = 2 + static_cast<int>(rng() % 8);
        for (int i = 0; i < n; ++i) m.models.push_back("m" + std::to_string(i));
        m.benchmarks = {"b"};
        std::vector<double> row;
        for (int i = 0; i < n; ++i)
            row.push_back(static_cast<double>(rng() % 5) / 4.0);  // frequent ties
        m.scores = {row};
        auto rows = average_rank(m, TieRule::fractional);
        double sum = 0.0;
        for (const auto& r : rows) sum += r.average_rank;
        CHECK(sum == doctest::Approx(n * (n + 1) / 2.0));
    }
}

TEST_CASE("ranks are invariant under monotone rescaling") {
    auto m = fixture::benchmark_matrix();
    auto base = average_rank(m);
    for (auto& row : m.scores) {
        for (auto& v : row) v = std::exp(3.0 * v) + 7.0;  // strictly monotone
    }
    auto rescaled = average_rank(m);
    REQUIRE(base.size() == rescaled.size());
    for (std::size_t i = 0; i < base.size(); ++i) {
        CHECK(base[i].model == rescaled[i].model);
        CHECK(base[i].average_rank == doctest::Approx(rescaled[i].average_rank));
    }
}

TEST_CASE("benchmark fixture reproduces the published averages") {
    auto rows = average_rank(fixture::benchmark_matrix(), TieRule::fractional);
    auto expected = fixture::expected_average_ranks();
    REQUIRE(rows.size() == expected.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].model == expected[i].first);
        CHECK(rows[i].average_rank == doctest::Approx(expected[i].second).epsilon(1e-9));
    }
    // competition tie rule does NOT reproduce the published table
    auto competition = average_rank(fixture::benchmark_matrix(), TieRule::competition);
    bool differs = false;
    for (std::size_t i = 0; i < competition.size(); ++i) {
        if (std::abs(competition[i].average_rank - expected[i].second) > 1e-9) differs = true;
    }
    CHECK(differs);
}

TEST_CASE("score matrix parses from delimited text") {
    auto m = parse_score_matrix("benchmark,A,B\nb1,0.5,0.25\nb2,0.75,0.5\n");
    CHECK(m.models == std::vector<std::string>{"A", "B"});
    CHECK(m.scores[1][0] == doctest::Approx(0.75));
    auto semi = parse_score_matrix(fixture::benchmark_matrix_csv());
    CHECK(semi.models.size() == 10);
    CHECK(semi.benchmarks.size() == 10);
    CHECK_THROWS_AS(parse_score_matrix("benchmark,A,B\nb1,0.5\n"), DataError);
    CHECK_THROWS_AS(parse_score_matrix("benchmark,A,B\nb1,0.5,oops\n"), DataError);
}

TEST_SUITE_END();
