#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "reprosel/ranking.hpp"
#include "reprosel/repro_matrix.hpp"
#include "reprosel/scores.hpp"
#include "reprosel/selection.hpp"
#include "reprosel/weight_store.hpp"

namespace reprosel {

struct AnalysisOptions {
    RankOrder rank_order{RankOrder::absolute};
    bool normalize_overall{false};
};

/// Intermediate matrices for one training mode.
///
/// Aggregation order: per-run threshold matrices, mean over thresholds, mean
/// over runs. View-specific matrices are then averaged over views for the
/// views-average score.
struct ModeAnalysis {
    std::string mode_id;
    std::vector<std::uint64_t> run_ids;
    std::vector<ReproMatrix> view_matrices;  // [view], models x models
    std::vector<ReproMatrix> gnn_matrices;   // [model], views x views
    // [model][threshold], views x views, mean over runs only.
    std::vector<std::vector<ReproMatrix>> gnn_threshold_matrices;
    std::vector<StrengthProfile> profiles;  // [model]
    // [run][model]: union of top-k sets over views and thresholds.
    std::vector<std::vector<std::vector<std::size_t>>> accumulated_sets;
};

/// Throws StudyError when a cell is missing or when run ids are not the same
/// for every cell of the mode (runs are paired by id across cells).
ModeAnalysis analyze_mode(const WeightStore& store, std::size_t mode, const AnalysisOptions& options = {});

/// All eight scores for one mode, in kAllScores order.
std::vector<PairwiseScore> compute_scores(const ModeAnalysis& analysis);

struct ModeSelection {
    std::string mode_id;
    ReproMatrix view_average;
    ReproMatrix rank_correlation;
    ReproMatrix overall;
    Selection selection;
};

struct Provenance {
    std::vector<std::string> aggregation_steps;
    std::vector<std::string> model_pool;
    std::vector<std::string> views;
    std::vector<std::string> modes;
    std::vector<std::size_t> thresholds;
    std::size_t n_r{};
    std::vector<std::vector<std::uint64_t>> run_ids;  // [mode]
    RankOrder rank_order{RankOrder::absolute};
    bool normalize_overall{false};
    double tie_tolerance{kTieTolerance};
    double kl_epsilon{kKlEpsilon};
};

struct SelectionReport {
    std::vector<std::string> model_ids;
    std::vector<ModeSelection> per_mode;
    // Across modes: mean view-average matrix plus the rank correlation of
    // profiles built from mode-averaged GNN-specific matrices.
    ModeSelection grand;
    bool modes_agree{true};
    std::vector<double> winner_weight_profile;  // grand winner, mean |w|
    Provenance provenance;
};

struct StudyResult {
    std::vector<ModeAnalysis> modes;
    ScoreTable scores;
    SelectionReport report;
};

/// Matrices, scores and selection for a whole store. Needs at least two
/// models and two views.
StudyResult run_pipeline(const WeightStore& store, const AnalysisOptions& options = {});

}  // namespace reprosel
