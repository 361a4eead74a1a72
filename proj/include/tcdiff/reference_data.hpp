#pragma once

#include <array>
#include <string>
#include <vector>

#include "tcdiff/statistics.hpp"

namespace tcdiff::reference {

/// A previously discovered difficulty measure and the correlation magnitude
/// it reached against model scores.
struct DiscoveredMeasure {
    std::vector<int> statistics;  // canonical statistic ids
    double correlation;
};

/// All discovered measures that reached correlation magnitude > 0.88,
/// strongest first. Shipped as reference context; never recomputed.
const std::vector<DiscoveredMeasure>& discovered_measures();

/// Correlation magnitude of each individual statistic with model scores,
/// indexed by canonical statistic id.
const std::array<double, stats::kStatisticCount>& statistic_correlations();

/// The same two tables rendered as JSON documents (the form written to the
/// data/reference files and attached to --context reports).
std::string discovered_measures_json();
std::string statistic_correlations_json();

}  // namespace tcdiff::reference
