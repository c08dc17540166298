#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hyperkg/analysis.hpp"
#include "support.hpp"

#include <algorithm>
#include <random>
#include <sstream>

using namespace hyperkg::analysis;
using hyperkg::geometry::Curvature;
using testsupport::random_vector;

TEST_CASE("answer normalization fixtures") {
    // Rule chain applied by hand: lowercase -> strip punctuation ->
    // drop articles -> collapse whitespace.
    CHECK(normalize_answer("The  United States!") == "united states");
    CHECK(normalize_answer("") == "");
    CHECK(normalize_answer("American") == "american");
    CHECK(normalize_answer("a  An the THE") == "");
    CHECK(normalize_answer("  spaced   out  ") == "spaced out");
    CHECK(normalize_answer("Ph.D.") == "phd");
    CHECK(normalize_answer("an apple") == "apple");
    CHECK(normalize_answer("Can't Stop") == "cant stop");
    // The article must match as a whole word.
    CHECK(normalize_answer("theme park") == "theme park");
}

TEST_CASE("normalization is idempotent") {
    const std::vector<std::string> samples{
        "The  United States!", "Joel Zwick", "14 March 1909", "A(n) THE test...",
    };
    for (const auto& s : samples) {
        const auto once = normalize_answer(s);
        CHECK(normalize_answer(once) == once);
    }
}

TEST_CASE("em score") {
    std::vector<PredictionRecord> all_match{
        {"1", "Greek", "Greek"}, {"2", "American", "American"}};
    CHECK(em_score(all_match) == doctest::Approx(100.0));

    std::vector<PredictionRecord> none{{"1", "French", "Greek"}, {"2", "x", "y"}};
    CHECK(em_score(none) == doctest::Approx(0.0));

    std::vector<PredictionRecord> quarter{
        {"1", "Greek", "Greek"},
        {"2", "French", "Greek"},
        {"3", "", "Greek"},
        {"4", "greek", "Latin"},
    };
    CHECK(em_score(quarter) == doctest::Approx(25.0));

    // Normalization-level equality counts as a match.
    std::vector<PredictionRecord> fuzzy{{"1", "the  united states!", "United States"}};
    CHECK(em_score(fuzzy) == doctest::Approx(100.0));

    CHECK_THROWS_AS(em_score({}), std::invalid_argument);
    std::vector<PredictionRecord> dup{{"1", "a", "a"}, {"1", "b", "b"}};
    CHECK_THROWS_AS(em_score(dup), std::invalid_argument);
}

TEST_CASE("em score is invariant under pre-normalized inputs") {
    std::vector<PredictionRecord> records{
        {"1", "The Answer!", "answer"}, {"2", "Wrong", "right"}};
    std::vector<PredictionRecord> normalized = records;
    for (auto& r : normalized) {
        r.prediction = normalize_answer(r.prediction);
        r.gold = normalize_answer(r.gold);
    }
    CHECK(em_score(records) == em_score(normalized));
}

TEST_CASE("prediction record loader") {
    std::istringstream in(
        R"({"id":"1","prediction":"Greek","gold":"Greek"})" "\n"
        "\n"
        R"({"id":"2","prediction":"x","gold":"y"})" "\n");
    const auto records = load_prediction_records(in);
    REQUIRE(records.size() == 2);
    CHECK(records[0].prediction == "Greek");

    std::istringstream bad(R"({"id":"1","prediction":7,"gold":"y"})" "\n");
    CHECK_THROWS_AS(load_prediction_records(bad), std::runtime_error);
}

TEST_CASE("embedding table text roundtrip with spaced names") {
    std::istringstream in(
        "3 2\n"
        "Eric Whitacre 0.5 -1.25\n"
        "Cloudburst 1 2\n"
        "14 March 1909 0 0.125\n");
    const auto table = EmbeddingTable::load(in, EmbeddingFormat::text);
    CHECK(table.size() == 3);
    CHECK(table.dim() == 2);
    CHECK(table.contains("Eric Whitacre"));
    CHECK(table.contains("14 March 1909"));
    CHECK(table.vector("Cloudburst")[1] == doctest::Approx(2.0));

    std::ostringstream out;
    table.save(out);
    std::istringstream back(out.str());
    const auto reloaded = EmbeddingTable::load(back, EmbeddingFormat::text);
    CHECK(reloaded.names() == table.names());
    CHECK((reloaded.vectors() - table.vectors()).norm() == 0.0);
}

TEST_CASE("embedding table error reporting") {
    std::istringstream short_row("2 3\nname 1 2 3\nother 1 2\n");
    CHECK_THROWS_WITH_AS(EmbeddingTable::load(short_row, EmbeddingFormat::text),
                         doctest::Contains("line 3"), std::runtime_error);

    std::istringstream dup("2 1\nsame 1\nsame 2\n");
    CHECK_THROWS_WITH_AS(EmbeddingTable::load(dup, EmbeddingFormat::text),
                         doctest::Contains("same"), std::invalid_argument);

    std::istringstream bad_number("1 1\nname abc\n");
    CHECK_THROWS_AS(EmbeddingTable::load(bad_number, EmbeddingFormat::text),
                    std::runtime_error);

    std::istringstream bad_count("3 1\nname 1\n");
    CHECK_THROWS_AS(EmbeddingTable::load(bad_count, EmbeddingFormat::text),
                    std::runtime_error);

    std::istringstream nonfinite("1 1\nname inf\n");
    CHECK_THROWS_AS(EmbeddingTable::load(nonfinite, EmbeddingFormat::text),
                    std::invalid_argument);
}

TEST_CASE("embedding table jsonl format") {
    std::istringstream in(
        R"({"name":"a","vector":[1.0,2.0]})" "\n"
        R"({"name":"b","vector":[3.0,4.0]})" "\n");
    const auto table = EmbeddingTable::load(in, EmbeddingFormat::jsonl);
    CHECK(table.size() == 2);
    CHECK(table.dim() == 2);

    std::istringstream mismatch(
        R"({"name":"a","vector":[1.0,2.0]})" "\n"
        R"({"name":"b","vector":[3.0]})" "\n");
    CHECK_THROWS_AS(EmbeddingTable::load(mismatch, EmbeddingFormat::jsonl),
                    std::runtime_error);
}

namespace {

EmbeddingTable table_from(const std::vector<std::string>& names,
                          const std::vector<Eigen::VectorXd>& rows) {
    Eigen::MatrixXd matrix(static_cast<Eigen::Index>(rows.size()), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        matrix.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
    }
    return EmbeddingTable(names, matrix);
}

} // namespace

TEST_CASE("distance comparison degenerate cases") {
    const Curvature c(1.0);
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(2);

    // Identical zero vectors: both distances are 0, tie counts as not larger.
    const auto tied = table_from({"s", "r"}, {zero, zero});
    HopPairs pairs;
    pairs.hop1 = {{"s", "r"}};
    pairs.hop2 = {{"s", "r"}};
    const auto tie_result = distance_comparison(tied, tied, pairs, c);
    CHECK(tie_result.hop1_pct == doctest::Approx(0.0));
    CHECK(tie_result.hop2_pct == doctest::Approx(0.0));
    CHECK(tie_result.n_pairs == 1);

    // Deep-in-ball hyperbolic points vs coincident Euclidean points.
    Eigen::VectorXd deep(2);
    deep << 2.0, 0.0;  // exp-mapped well away from the origin
    const auto hyp = table_from({"s", "r"}, {deep, -deep});
    const auto euc = table_from({"s", "r"}, {zero, zero});
    const auto sep = distance_comparison(hyp, euc, pairs, c);
    CHECK(sep.hop1_pct == doctest::Approx(100.0));
    CHECK(sep.hop2_pct == doctest::Approx(100.0));
}

TEST_CASE("distance comparison matches a per-pair recomputation") {
    std::mt19937_64 rng(5001);
    const Curvature c(1.0);
    const int n = 40;
    std::vector<std::string> names;
    std::vector<Eigen::VectorXd> hyp_rows;
    std::vector<Eigen::VectorXd> euc_rows;
    for (int i = 0; i < n; ++i) {
        names.push_back("e" + std::to_string(i));
        hyp_rows.push_back(random_vector(rng, 3));
        euc_rows.push_back(random_vector(rng, 3));
    }
    const auto hyp = table_from(names, hyp_rows);
    const auto euc = table_from(names, euc_rows);

    HopPairs pairs;
    std::uniform_int_distribution<int> pick(0, n - 1);
    for (int i = 0; i < 100; ++i) {
        pairs.hop1.emplace_back(names[pick(rng)], names[pick(rng)]);
        pairs.hop2.emplace_back(names[pick(rng)], names[pick(rng)]);
    }
    const auto result = distance_comparison(hyp, euc, pairs, c);

    // Scalar-by-scalar oracle over the same pairs.
    const auto recompute = [&](const std::vector<std::pair<std::string, std::string>>& ps) {
        int larger = 0;
        for (const auto& [a, b] : ps) {
            const auto ball = [&](const Eigen::VectorXd& v) {
                return hyperkg::geometry::project_to_ball(
                    hyperkg::geometry::exp_map_origin(hyperkg::geometry::TangentVector(v), c)
                        .coords(),
                    c);
            };
            const double geo = hyperkg::geometry::distance(ball(hyp.vector(a)),
                                                           ball(hyp.vector(b)));
            const double eu = (euc.vector(a) - euc.vector(b)).norm();
            if (geo > eu) ++larger;
        }
        return 100.0 * larger / static_cast<double>(ps.size());
    };
    CHECK(result.hop1_pct == doctest::Approx(recompute(pairs.hop1)).epsilon(1e-12));
    CHECK(result.hop2_pct == doctest::Approx(recompute(pairs.hop2)).epsilon(1e-12));
    CHECK(result.n_pairs == 100);

    // Reordering pairs leaves the percentages unchanged.
    HopPairs shuffled = pairs;
    std::shuffle(shuffled.hop1.begin(), shuffled.hop1.end(), rng);
    std::shuffle(shuffled.hop2.begin(), shuffled.hop2.end(), rng);
    const auto reordered = distance_comparison(hyp, euc, shuffled, c);
    CHECK(reordered.hop1_pct == doctest::Approx(result.hop1_pct));
    CHECK(reordered.hop2_pct == doctest::Approx(result.hop2_pct));
}

TEST_CASE("distance comparison monotone in Euclidean scaling") {
    std::mt19937_64 rng(5002);
    const Curvature c(0.44);
    const int n = 20;
    std::vector<std::string> names;
    std::vector<Eigen::VectorXd> hyp_rows;
    std::vector<Eigen::VectorXd> euc_rows;
    for (int i = 0; i < n; ++i) {
        names.push_back("e" + std::to_string(i));
        hyp_rows.push_back(random_vector(rng, 3));
        euc_rows.push_back(random_vector(rng, 3));
    }
    const auto hyp = table_from(names, hyp_rows);

    HopPairs pairs;
    std::uniform_int_distribution<int> pick(0, n - 1);
    for (int i = 0; i < 50; ++i) {
        pairs.hop1.emplace_back(names[pick(rng)], names[pick(rng)]);
        pairs.hop2.emplace_back(names[pick(rng)], names[pick(rng)]);
    }

    double prev_h1 = 101.0;
    double prev_h2 = 101.0;
    for (const double scale : {1.0, 2.0, 5.0, 20.0}) {
        std::vector<Eigen::VectorXd> scaled;
        for (const auto& row : euc_rows) scaled.push_back(scale * row);
        const auto result = distance_comparison(hyp, table_from(names, scaled), pairs, c);
        CHECK(result.hop1_pct <= prev_h1);
        CHECK(result.hop2_pct <= prev_h2);
        CHECK(result.hop1_pct >= 0.0);
        CHECK(result.hop1_pct <= 100.0);
        prev_h1 = result.hop1_pct;
        prev_h2 = result.hop2_pct;
    }
}

TEST_CASE("distance comparison missing names and in-ball mode") {
    const Curvature c(1.0);
    Eigen::VectorXd v(2);
    v << 0.2, 0.1;
    const auto table = table_from({"a", "b"}, {v, -v});
    HopPairs pairs;
    pairs.hop1 = {{"a", "missing"}};
    CHECK_THROWS_WITH_AS(distance_comparison(table, table, pairs, c),
                         doctest::Contains("missing"), std::invalid_argument);

    // already_in_ball skips the exp map: coordinates are used directly.
    HopPairs ok;
    ok.hop1 = {{"a", "b"}};
    ok.hop2 = {{"a", "b"}};
    const auto direct = distance_comparison(table, table, ok, c, true);
    const double expected_geo =
        hyperkg::geometry::distance(hyperkg::geometry::BallPoint(v, c),
                                    hyperkg::geometry::BallPoint(-v, c));
    const double expected_euc = (2.0 * v).norm();
    CHECK(direct.hop1_pct == (expected_geo > expected_euc ? 100.0 : 0.0));
}

TEST_CASE("curvature initialization policy") {
    hyperkg::hyperbolicity::DeltaEstimate estimate;
    estimate.mean = 0.144;
    CHECK(curvature_init_policy(estimate).value() == doctest::Approx(1.0));

    estimate.mean = 0.25;
    CHECK(std::round(curvature_init_policy(estimate).value() * 100.0) / 100.0 ==
          doctest::Approx(0.33));

    estimate.mean = 0.29;
    CHECK(std::round(curvature_init_policy(estimate).value() * 100.0) / 100.0 ==
          doctest::Approx(0.25));

    estimate.mean = 0.0;
    CHECK_THROWS_AS(curvature_init_policy(estimate), std::domain_error);
}
