#include "tcdiff/reference_data.hpp"

#include <json.hpp>

namespace tcdiff::reference {

namespace {

// Discovered measures with correlation magnitude > 0.88, strongest first.
// Statistic ids follow the canonical table order.
const std::vector<DiscoveredMeasure> kMeasures = {
    {{27, 19, 2, 0, 3, 21}, 0.884524539285},
    {{27, 19, 2, 0, 39, 3, 6, 21, 46}, 0.884444632266},
    {{27, 19, 2, 0, 12, 3, 21, 46}, 0.884417837328},
    {{27, 19, 2, 0, 39, 41, 3, 21}, 0.884389247487},
    {{27, 19, 2, 0, 39, 41, 3, 21, 47}, 0.883771907471},
    {{27, 15, 16, 19, 2, 0, 39, 42, 3, 46, 47}, 0.883726094418},
    {{27, 19, 2, 0, 13, 3, 21}, 0.883722932273},
    {{27, 19, 2, 0, 44, 3, 21, 45}, 0.883590459193},
    {{27, 15, 16, 19, 2, 0, 39, 41, 43, 3}, 0.883561148159},
    {{27, 19, 2, 0, 40, 43, 3, 21}, 0.883335585611},
    {{27, 15, 16, 19, 2, 0, 40, 42, 3, 46, 47}, 0.883257036313},
    {{27, 19, 2, 0, 11, 3, 21, 46, 47}, 0.883217937163},
    {{27, 19, 2, 0, 3, 21, 45, 47}, 0.883092632656},
    {{27, 2, 0, 39, 3, 5, 21}, 0.882946516641},
    {{27, 15, 16, 19, 2, 0, 39, 41, 44, 3, 46, 47}, 0.882914430188},
    {{27, 15, 16, 19, 2, 0, 44, 3}, 0.882863026072},
    {{28, 15, 16, 19, 2, 0, 39, 3}, 0.882825047536},
    {{27, 15, 16, 19, 2, 0, 41, 3}, 0.882628270942},
    {{28, 15, 16, 19, 2, 0, 39, 3, 46}, 0.882562918832},
    {{27, 2, 0, 44, 11, 3, 21, 46}, 0.882376082243},
    {{27, 15, 16, 2, 0, 39, 3, 46}, 0.882297072242},
    {{27, 19, 2, 0, 40, 11, 3, 21, 47}, 0.882245884638},
    {{27, 15, 16, 19, 2, 0, 39, 40, 9}, 0.882237171884},
    {{27, 2, 0, 13, 3, 21, 46}, 0.882046043522},
    {{27, 19, 2, 0, 39, 41, 3, 21, 45, 47}, 0.881936634248},
    {{27, 15, 16, 2, 0, 39, 9}, 0.881760155361},
    {{27, 19, 2, 0, 39, 43, 4, 5, 21}, 0.881643119225},
    {{27, 19, 2, 0, 3, 4, 21}, 0.881581392494},
    {{27, 19, 2, 0, 41, 3, 7, 21}, 0.881517499763},
    {{27, 15, 16, 2, 0, 39, 42, 44, 3}, 0.881490427511},
    {{27, 2, 0, 41, 11, 3, 21}, 0.88147122781},
    {{27, 19, 2, 0, 42, 13, 3, 21, 45, 47}, 0.881440344906},
    {{28, 15, 16, 19, 2, 0, 3}, 0.881440337829},
    {{27, 15, 16, 2, 0, 44, 3}, 0.881426394865},
    {{27, 15, 16, 2, 0, 41, 42, 3, 46}, 0.881404209076},
    {{27, 2, 0, 3, 21}, 0.881365728443},
    {{27, 15, 16, 2, 0, 43, 44, 3}, 0.881342679515},
    {{27, 2, 0, 3, 8, 21}, 0.881340929845},
    {{27, 2, 0, 39, 3, 21, 45}, 0.88117529932},
    {{27, 15, 16, 2, 0, 41, 3, 45}, 0.881163020765},
    {{27, 15, 17, 19, 2, 0, 39, 3}, 0.881044616332},
    {{27, 15, 16, 2, 0, 42, 44, 9}, 0.88091437587},
    {{27, 15, 16, 20, 2, 0, 39, 3, 45, 46}, 0.880910807679},
    {{27, 15, 16, 2, 0, 41, 9}, 0.880885142235},
    {{27, 15, 16, 19, 2, 0, 43, 9}, 0.880837764104},
    {{27, 2, 0, 3, 4, 21}, 0.880709196549},
    {{27, 15, 19, 20, 2, 0, 39, 3, 45}, 0.880654042756},
    {{27, 15, 19, 20, 2, 0, 39, 43, 44, 3, 47}, 0.88058845366},
    {{28, 15, 16, 2, 0, 39, 3, 4}, 0.88057312013},
    {{27, 15, 16, 2, 0, 40, 43, 3, 45, 46}, 0.880527649949},
    {{27, 15, 16, 2, 0, 40, 41, 3, 47}, 0.880466229085},
    {{27, 15, 16, 2, 0, 39, 9, 47}, 0.880427741747},
    {{27, 15, 16, 2, 0, 43, 3}, 0.880408773828},
    {{27, 15, 16, 19, 2, 0, 39, 12, 3}, 0.880334639215},
    {{27, 2, 0, 44, 11, 3, 21, 47}, 0.880326776791},
    {{27, 2, 0, 39, 41, 3, 8, 21}, 0.880295177778},
    {{27, 15, 16, 2, 0, 3}, 0.880252374975},
    {{27, 2, 0, 41, 11, 3, 21, 45}, 0.880239646699},
    {{27, 15, 16, 2, 0, 40, 9, 47}, 0.880200393627},
    {{27, 2, 0, 42, 11, 3, 21, 46, 47}, 0.880083849581},
};

// Correlation magnitude of each statistic with model scores, canonical order.
constexpr std::array<double, stats::kStatisticCount> kCorrelations = {
    0.495247387609,   // Shannon Class Diversity
    0.0360726401633,  // Shannon Class Equitability
    0.164274169881,   // Class Imbalance
    0.720896895887,   // Maximum Unigram Hellinger Similarity
    0.619410655023,   // Maximum Bigram Hellinger Similarity
    0.470443549996,   // Maximum Trigram Hellinger Similarity
    0.332573671726,   // Maximum 4-gram Hellinger Similarity
    0.261369081098,   // Maximum 5-gram Hellinger Similarity
    0.599742584859,   // Mean Maximum Hellinger Similarity
    0.574120851308,   // Average Unigram Hellinger Similarity
    0.457163222902,   // Average Bigram Hellinger Similarity
    0.328687842958,   // Average Trigram Hellinger Similarity
    0.24319918737,    // Average 4-gram Hellinger Similarity
    0.20741866152,    // Average 5-gram Hellinger Similarity
    0.454790305987,   // Mean Average Hellinger Similarity
    0.64706340007,    // Top Unigram Interference
    0.574018328147,   // Top Bigram Interference
    0.556869160804,   // Top Trigram Interference
    0.418374832964,   // Top 4-gram Interference
    0.469209823975,   // Top 5-gram Interference
    0.592624636419,   // Mean Top n-gram Interference
    0.293673742958,   // Top Unigram Mutual Information
    0.0257123532616,  // Top Bigram Mutual Information
    0.0337710575222,  // Top Trigram Mutual Information
    0.0279796567333,  // Top 4-gram Mutual Information
    0.18246852683,    // Top 5-gram Mutual Information
    0.0413350594379,  // Mean Top n-gram Mutual Information
    0.0578981403589,  // Distinct Unigrams : Total Unigrams
    0.0252155036575,  // Distinct Bigrams : Total Bigrams
    0.00465734012651, // Distinct Trigrams : Total Trigrams
    0.0015168555015,  // Distinct 4-grams : Total 4-grams
    0.00664063690957, // Distinct 5-grams : Total 5-grams
    0.0141636605848,  // Mean Distinct n-grams : Total n-grams
    0.0587541973146,  // Unigram Shannon Diversity
    0.0516963177593,  // Bigram Shannon Diversity
    0.0396008851652,  // Trigram Shannon Diversity
    0.0259739834385,  // 4-gram Shannon Diversity
    0.0189276868112,  // 5-gram Shannon Diversity
    0.0440696293705,  // Mean n-gram Shannon Diversity
    0.129571167512,   // Unigram Shannon Equitability
    0.116996612078,   // Bigram Shannon Equitability
    0.130883685416,   // Trigram Shannon Equitability
    0.142930086195,   // 4-gram Shannon Equitability
    0.118068879785,   // 5-gram Shannon Equitability
    0.14924393263,    // Mean n-gram Shannon Equitability
    0.0431234569786,  // Shannon Character Diversity
    0.0402159715373,  // Shannon Character Equitability
    0.0250329647438,  // Inverse Flesch Reading Ease
};

}  // namespace

const std::vector<DiscoveredMeasure>& discovered_measures() { return kMeasures; }

const std::array<double, stats::kStatisticCount>& statistic_correlations() {
    return kCorrelations;
}

std::string discovered_measures_json() {
    nlohmann::ordered_json j;
    j["description"] =
        "Difficulty measures found by the evolutionary search with correlation "
        "magnitude above 0.88 against model scores, strongest first.";
    nlohmann::ordered_json list = nlohmann::ordered_json::array();
    for (const auto& m : kMeasures) {
        nlohmann::ordered_json entry;
        nlohmann::ordered_json names = nlohmann::ordered_json::array();
        for (const int id : m.statistics) {
            names.push_back(stats::statistic_table()[static_cast<std::size_t>(id)].name);
        }
        entry["statistics"] = std::move(names);
        entry["correlation"] = m.correlation;
        list.push_back(std::move(entry));
    }
    j["measures"] = std::move(list);
    return j.dump(2) + "\n";
}

std::string statistic_correlations_json() {
    nlohmann::ordered_json j;
    j["description"] =
        "Correlation magnitude of each individual statistic with model scores.";
    nlohmann::ordered_json table = nlohmann::ordered_json::object();
    for (int i = 0; i < stats::kStatisticCount; ++i) {
        table[stats::statistic_table()[static_cast<std::size_t>(i)].name] =
            kCorrelations[static_cast<std::size_t>(i)];
    }
    j["correlations"] = std::move(table);
    return j.dump(2) + "\n";
}

}  // namespace tcdiff::reference
