#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "reprosel/pipeline.hpp"
#include "reprosel/weight_store.hpp"

// Brute-force reference implementations. Nothing here calls into the
// reprosel ranking, matrix, score or selection code: the store is read only
// as raw records.
namespace oracle_bench {

using Grid = std::vector<std::vector<double>>;

/// Literal |a ∩ b| / k over two index lists.
double oracle_overlap(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b, std::size_t k);

struct OracleModeReport {
    std::string mode_id;
    Grid view_average;
    Grid rank_correlation;
    Grid overall;
    std::vector<double> strengths;
    std::size_t winner{};
    bool tie{false};
    // Keyed by score label ("v.a", "KL", ...). Empty for the grand report.
    std::map<std::string, Grid> score_pairwise;
    std::map<std::string, std::vector<double>> score_per_model;
};

struct OracleReport {
    std::vector<OracleModeReport> modes;
    OracleModeReport grand;
    std::vector<double> winner_weights;
};

/// Loop-everything re-implementation of the whole pipeline, meant for small
/// studies. Uses absolute-value ranking and the literal (unnormalized) sum.
OracleReport oracle_pipeline(const reprosel::WeightStore& store);

/// Differences between the main pipeline and the oracle: every matrix entry
/// and scalar beyond `tol`, and any winner or tie-flag disagreement.
std::vector<std::string> compare_with_oracle(const reprosel::StudyResult& result, const OracleReport& oracle,
                                             double tol = 1e-12);

}  // namespace oracle_bench
