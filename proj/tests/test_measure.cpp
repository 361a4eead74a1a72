#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include <json.hpp>

#include "support.hpp"
#include "tcdiff/error.hpp"
#include "tcdiff/io.hpp"
#include "tcdiff/measure.hpp"
#include "tcdiff/reference_data.hpp"

using namespace tcdiff;
using measure::MeasureGenome;
namespace sid = stats::sid;
namespace fs = std::filesystem;

namespace {

stats::StatisticVector random_vector(Rng& rng, const std::string& name = "vec") {
    stats::StatisticVector vec;
    vec.dataset_name = name;
    for (auto& v : vec.values) v = rng.next_double() * 3.0;
    return vec;
}

}  // namespace

TEST_CASE("d1 and d2 presets") {
    const auto d2 = MeasureGenome::d2();
    CHECK(d2.count() == 5);
    const auto d2_names = d2.names();
    const std::set<std::string> expected = {
        "Distinct Unigrams : Total Unigrams", "Class Imbalance", "Shannon Class Diversity",
        "Maximum Unigram Hellinger Similarity", "Top Unigram Mutual Information"};
    CHECK(std::set<std::string>(d2_names.begin(), d2_names.end()) == expected);

    const auto d1 = MeasureGenome::d1();
    CHECK(d1.count() == 6);
    for (int i = 0; i < stats::kStatisticCount; ++i) {
        if (i == sid::top_interference + 4) {
            CHECK(d1.test(i));
            CHECK_FALSE(d2.test(i));
        } else {
            CHECK(d1.test(i) == d2.test(i));
        }
    }
}

TEST_CASE("evaluate sums selected entries") {
    // single-bit imbalance on a balanced dataset evaluates to 0
    const auto balanced = support::make_dataset({
        {{"good", "movie"}, "pos"},
        {{"bad", "movie"}, "neg"},
    });
    const auto vec = stats::compute_all(balanced);
    MeasureGenome only_imbalance;
    only_imbalance.set(sid::class_imbalance);
    CHECK(measure::evaluate(only_imbalance, vec) == 0.0);

    // d1 minus d2 is the Top 5-gram Interference entry: the genomes differ
    // by exactly that bit, evaluate() is a canonical-order sum (bitwise
    // reproducible), and the float subtraction agrees to rounding.
    Rng rng(1);
    for (int trial = 0; trial < 100; ++trial) {
        const auto v = random_vector(rng);
        const double d1 = measure::evaluate(MeasureGenome::d1(), v);
        const double d2 = measure::evaluate(MeasureGenome::d2(), v);

        // bitwise: evaluate is the canonical-order sum of the named entries
        const double d2_manual =
            v.values[sid::shannon_class_diversity] + v.values[sid::class_imbalance] +
            v.values[sid::max_hellinger] + v.values[sid::top_mutual_info] +
            v.values[sid::distinct_total];
        CHECK(d2 == d2_manual);
        const double d1_manual =
            v.values[sid::shannon_class_diversity] + v.values[sid::class_imbalance] +
            v.values[sid::max_hellinger] + v.values[sid::top_interference + 4] +
            v.values[sid::top_mutual_info] + v.values[sid::distinct_total];
        CHECK(d1 == d1_manual);

        // the subtraction of two independently rounded sums carries only
        // rounding noise (values here are O(10), so a few ulps)
        CHECK(std::abs((d1 - d2) - v.values[sid::top_interference + 4]) <= 1e-13);
    }
}

TEST_CASE("evaluate is additive over disjoint genomes and monotone") {
    Rng rng(2);
    for (int trial = 0; trial < 100; ++trial) {
        auto v = random_vector(rng);
        MeasureGenome g1, g2;
        for (int i = 0; i < stats::kStatisticCount; ++i) {
            if (rng.next_bool()) g1.set(i);
            else if (rng.next_bool()) g2.set(i);
        }
        MeasureGenome unioned;
        for (int i = 0; i < stats::kStatisticCount; ++i) {
            if (g1.test(i) || g2.test(i)) unioned.set(i);
        }
        CHECK(measure::evaluate(unioned, v) ==
              doctest::Approx(measure::evaluate(g1, v) + measure::evaluate(g2, v))
                  .epsilon(1e-12));

        // raising one selected statistic raises the measure
        if (g1.any()) {
            int selected = -1;
            for (int i = 0; i < stats::kStatisticCount; ++i) {
                if (g1.test(i)) { selected = i; break; }
            }
            const double before = measure::evaluate(g1, v);
            v.values[static_cast<std::size_t>(selected)] += 0.5;
            CHECK(measure::evaluate(g1, v) > before);
        }
    }
}

TEST_CASE("band thresholds") {
    CHECK(measure::band(4.51) == measure::Band::hard);
    CHECK(measure::band(3.29) == measure::Band::standard);
    CHECK(measure::band(4.0) == measure::Band::standard);  // strict inequality
    CHECK(measure::band(4.0 + 1e-9) == measure::Band::hard);
    CHECK(measure::band(3.5, 3.0) == measure::Band::hard);  // configurable threshold
    CHECK(std::string(measure::band_name(measure::Band::hard)) == "hard");

    // step function: adding any constant smaller than the distance to the
    // threshold never changes the band
    Rng rng(9);
    for (int trial = 0; trial < 200; ++trial) {
        const double threshold = rng.next_double() * 8.0;
        const double difficulty = rng.next_double() * 8.0;
        const double distance = std::abs(threshold - difficulty);
        if (distance < 1e-9) continue;
        const double shift = (rng.next_double() * 0.99) * distance *
                             (difficulty > threshold ? 1.0 : -1.0) * -1.0;
        // shift moves toward the threshold but stays short of it
        CHECK(measure::band(difficulty + shift, threshold) ==
              measure::band(difficulty, threshold));
    }
}

TEST_CASE("genome construction") {
    const auto g = MeasureGenome::from_names(
        {"Class Imbalance", "5-gram Shannon Diversity"}, "mine");
    CHECK(g.count() == 2);
    CHECK(g.test(sid::class_imbalance));
    CHECK(g.test(sid::ngram_diversity + 4));
    CHECK(g.name() == "mine");
    CHECK_THROWS_AS(MeasureGenome::from_names({"Bogus Statistic"}), ConfigError);

    const auto path = fs::temp_directory_path() / "tcdiff_genome.json";
    std::ofstream(path) << R"({"name": "file measure", "statistics":
        ["Class Imbalance", "Shannon Class Diversity"]})";
    const auto from_file = MeasureGenome::from_json_file(path);
    CHECK(from_file.count() == 2);
    CHECK(from_file.name() == "file measure");
    fs::remove(path);
}

TEST_CASE("baseline table") {
    const auto builtin = measure::BaselineTable::builtin();
    const auto mi = builtin.lookup(sid::top_mutual_info);
    REQUIRE(mi.has_value());
    CHECK(mi->mean == 1.23);
    CHECK(mi->sigma == 0.430);
    CHECK(builtin.lookup(sid::distinct_total)->mean == 0.0666);
    CHECK(builtin.lookup(sid::class_imbalance)->mean == 0.503);
    CHECK(builtin.lookup(sid::shannon_class_diversity)->sigma == 0.759);
    CHECK(builtin.lookup(sid::max_hellinger)->sigma == 0.165);
    CHECK_FALSE(builtin.lookup(sid::inverse_fre).has_value());

    const auto path = fs::temp_directory_path() / "tcdiff_baseline.json";
    std::ofstream(path) << R"({"Inverse Flesch Reading Ease": {"mean": 0.02, "sigma": 0.01},
                               "Class Imbalance": {"mean": 0.6, "sigma": 0.3}})";
    const auto loaded = measure::BaselineTable::from_json_file(path);
    CHECK(loaded.lookup(sid::inverse_fre)->mean == 0.02);
    CHECK(loaded.lookup(sid::class_imbalance)->mean == 0.6);       // overridden
    CHECK(loaded.lookup(sid::top_mutual_info)->mean == 1.23);      // builtin kept
    fs::remove(path);

    const auto bad = fs::temp_directory_path() / "tcdiff_baseline_bad.json";
    std::ofstream(bad) << R"({"No Such Statistic": {"mean": 1, "sigma": 1}})";
    CHECK_THROWS_AS(measure::BaselineTable::from_json_file(bad), ParseError);
    fs::remove(bad);
}

TEST_CASE("report rows, z-scores, and exact sum") {
    stats::StatisticVector vec;
    vec.dataset_name = "fixture";
    // all d2 constituents at their baseline means -> z = 0 everywhere
    vec.values[sid::distinct_total] = 0.0666;
    vec.values[sid::class_imbalance] = 0.503;
    vec.values[sid::shannon_class_diversity] = 0.905;
    vec.values[sid::max_hellinger] = 0.554;
    vec.values[sid::top_mutual_info] = 1.23;

    const auto baseline = measure::BaselineTable::builtin();
    auto rep = measure::report(vec, MeasureGenome::d2(), baseline);
    REQUIRE(rep.rows.size() == 5);
    double sum = 0.0;
    for (const auto& row : rep.rows) {
        REQUIRE(row.z.has_value());
        CHECK(*row.z == 0.0);
        CHECK_FALSE(row.notable);
        sum += row.value;
    }
    CHECK(rep.difficulty == sum);  // exact, not approximate
    CHECK(rep.difficulty_band == measure::Band::standard);
    CHECK_FALSE(rep.diversity_domination);

    // mutual information 1.67 vs 1.23/0.430: z just above 1, flagged notable
    vec.values[sid::top_mutual_info] = 1.67;
    rep = measure::report(vec, MeasureGenome::d2(), baseline);
    int notable_count = 0;
    for (const auto& row : rep.rows) {
        if (row.id == sid::top_mutual_info) {
            CHECK(*row.z == doctest::Approx(1.0232558139534884).epsilon(1e-12));
            CHECK(row.notable);
            ++notable_count;
        } else {
            CHECK_FALSE(row.notable);
        }
    }
    CHECK(notable_count == 1);
}

TEST_CASE("report marks rows without baselines") {
    stats::StatisticVector vec;
    vec.dataset_name = "fixture";
    MeasureGenome g;
    g.set(sid::class_imbalance);
    g.set(sid::inverse_fre);  // not in the builtin table
    const auto rep = measure::report(vec, g, measure::BaselineTable::builtin());
    REQUIRE(rep.rows.size() == 2);
    for (const auto& row : rep.rows) {
        if (row.id == sid::inverse_fre) {
            CHECK_FALSE(row.baseline.has_value());
            CHECK_FALSE(row.z.has_value());
        } else {
            CHECK(row.baseline.has_value());
        }
    }
}

TEST_CASE("diversity domination warning") {
    const auto make_balanced = [](int classes) {
        std::vector<std::pair<std::vector<std::string>, std::string>> records;
        for (int c = 0; c < classes; ++c) {
            records.push_back({{"token" + std::to_string(c), "shared"},
                               "class_" + std::to_string(c)});
        }
        return support::make_dataset(records, "balanced");
    };

    const auto baseline = measure::BaselineTable::builtin();

    // 30 balanced classes: warning present
    const auto vec30 = stats::compute_all(make_balanced(30));
    CHECK(measure::report(vec30, MeasureGenome::d2(), baseline).diversity_domination);

    // 25 balanced classes is the documented boundary: warning present
    const auto vec25 = stats::compute_all(make_balanced(25));
    CHECK(measure::report(vec25, MeasureGenome::d2(), baseline).diversity_domination);

    // 24 balanced classes: no warning
    const auto vec24 = stats::compute_all(make_balanced(24));
    CHECK_FALSE(measure::report(vec24, MeasureGenome::d2(), baseline).diversity_domination);

    // many classes but heavily unbalanced: no warning
    std::vector<std::pair<std::vector<std::string>, std::string>> skewed;
    for (int i = 0; i < 500; ++i) skewed.push_back({{"bulk", "text"}, "dominant"});
    for (int c = 0; c < 29; ++c) {
        skewed.push_back({{"rare" + std::to_string(c)}, "tiny_" + std::to_string(c)});
    }
    const auto vec_skewed = stats::compute_all(support::make_dataset(skewed, "skewed"));
    CHECK(vec_skewed.values[sid::class_imbalance] > 0.25);
    CHECK_FALSE(measure::report(vec_skewed, MeasureGenome::d2(), baseline).diversity_domination);
}

TEST_CASE("report rendering") {
    Rng rng(5);
    auto vec = random_vector(rng, "render me");
    vec.flags[sid::top_mutual_info] = stats::StatFlag::degenerate;
    const auto rep =
        measure::report(vec, MeasureGenome::d1(), measure::BaselineTable::builtin());

    const auto json_text = measure::to_json(rep, false);
    const auto j = nlohmann::json::parse(json_text);
    CHECK(j["dataset"] == "render me");
    CHECK(j["measure"] == "d1");
    CHECK(j["constituents"].size() == 6);
    CHECK(j["difficulty"].get<double>() == rep.difficulty);
    bool saw_flag = false;
    for (const auto& row : j["constituents"]) {
        if (row.contains("flag") && row["flag"] == "degenerate") saw_flag = true;
    }
    CHECK(saw_flag);
    CHECK_FALSE(j.contains("context"));

    const auto with_context = nlohmann::json::parse(measure::to_json(rep, true));
    CHECK(with_context.contains("context"));
    CHECK(with_context["context"]["discovered_measures"]["measures"].size() == 60);

    const auto md = measure::to_markdown(rep, true);
    CHECK(md.find("| constituent |") != std::string::npos);
    CHECK(md.find("Top Unigram Mutual Information") != std::string::npos);
    CHECK(md.find("Reference context") != std::string::npos);
}

TEST_CASE("reference data tables") {
    const auto& measures = reference::discovered_measures();
    REQUIRE(measures.size() == 60);
    // strongest first
    for (std::size_t i = 1; i < measures.size(); ++i) {
        CHECK(measures[i - 1].correlation >= measures[i].correlation);
    }
    // every id valid
    for (const auto& m : measures) {
        CHECK(!m.statistics.empty());
        for (const int id : m.statistics) {
            CHECK(id >= 0);
            CHECK(id < stats::kStatisticCount);
        }
    }
    // the strongest entry is the published best measure (same bits as d1)
    const auto d1 = MeasureGenome::d1();
    std::set<int> first(measures[0].statistics.begin(), measures[0].statistics.end());
    std::set<int> d1_ids;
    for (int i = 0; i < stats::kStatisticCount; ++i) {
        if (d1.test(i)) d1_ids.insert(i);
    }
    CHECK(first == d1_ids);
    CHECK(measures[0].correlation == 0.884524539285);

    // d2's bits appear in the list too
    const auto d2 = MeasureGenome::d2();
    std::set<int> d2_ids;
    for (int i = 0; i < stats::kStatisticCount; ++i) {
        if (d2.test(i)) d2_ids.insert(i);
    }
    bool found_d2 = false;
    for (const auto& m : measures) {
        if (std::set<int>(m.statistics.begin(), m.statistics.end()) == d2_ids) {
            found_d2 = true;
            CHECK(m.correlation == 0.881365728443);
        }
    }
    CHECK(found_d2);

    const auto& corr = reference::statistic_correlations();
    CHECK(corr[sid::max_hellinger] == 0.720896895887);
    CHECK(corr[sid::inverse_fre] == 0.0250329647438);
    for (const double c : corr) {
        CHECK(c > 0.0);
        CHECK(c < 1.0);
    }
}

TEST_CASE("shipped reference files match the embedded tables") {
    const fs::path data_dir = TCDIFF_DATA_DIR;
    const auto measures_file = data_dir / "reference" / "discovered_measures.json";
    const auto corr_file = data_dir / "reference" / "statistic_correlations.json";
    REQUIRE(fs::exists(measures_file));
    REQUIRE(fs::exists(corr_file));
    CHECK(io::read_file(measures_file) == reference::discovered_measures_json());
    CHECK(io::read_file(corr_file) == reference::statistic_correlations_json());
}
