#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "reprosel/repro_matrix.hpp"

namespace reprosel {

/// The eight pairwise reproducibility scores, in score-table column order.
enum class ScoreId {
    views_average,                      // v.a
    rank_correlation,                   // r.c
    accumulated_weighted_intersection,  // a.w.i
    accumulated_weights_correlation,    // a.w.c
    strength_correlation,               // s.c
    accumulated_rank_intersection,      // a.r.i
    kl_divergence,                      // KL
    l2_distance,                        // L2
};

inline constexpr std::array<ScoreId, 8> kAllScores{
    ScoreId::views_average,
    ScoreId::rank_correlation,
    ScoreId::accumulated_weighted_intersection,
    ScoreId::accumulated_weights_correlation,
    ScoreId::strength_correlation,
    ScoreId::accumulated_rank_intersection,
    ScoreId::kl_divergence,
    ScoreId::l2_distance,
};

enum class Polarity { higher_better, lower_better };

/// Short column label, e.g. "v.a" or "KL".
std::string_view score_label(ScoreId id);
std::optional<ScoreId> score_from_label(std::string_view label);
Polarity score_polarity(ScoreId id);

/// Smoothing added to every strength before it is normalized into a
/// probability vector for the KL score.
inline constexpr double kKlEpsilon = 1e-12;

/// Spread below which a vector counts as constant (zero-variance Pearson
/// inputs, degenerate min-max normalization).
inline constexpr double kConstantTolerance = 1e-12;

/// Node strengths of one model's GNN-specific matrices.
struct StrengthProfile {
    std::string model_id;
    // [threshold][view], strengths of the run-averaged matrix at each threshold.
    std::vector<std::vector<double>> per_threshold_strengths;
    std::vector<double> mean_strengths;         // n_v, mean over thresholds
    std::vector<double> accumulated_strengths;  // n_k * n_v, threshold-major
    std::vector<std::size_t> view_ranks;        // rank (1 = strongest) of each view

    std::size_t n_views() const noexcept { return mean_strengths.size(); }
    std::size_t n_thresholds() const noexcept { return per_threshold_strengths.size(); }
};

/// Builds a profile from one GNN-specific matrix per threshold (threshold order).
StrengthProfile make_strength_profile(std::string model_id, std::span<const ReproMatrix> per_threshold);

/// Values closer than this are tied when ranking views by strength.
inline constexpr double kRankTieTolerance = 1e-9;

/// Rank of each entry when sorted descending, starting at 1. Values within
/// kRankTieTolerance of each other are tied and keep index order.
std::vector<std::size_t> descending_ranks(std::span<const double> values);

/// Pearson correlation; 0 when either input is constant.
double pearson_correlation(std::span<const double> a, std::span<const double> b);

/// Spearman correlation of two tie-free rank vectors (Pearson on the ranks).
double spearman_of_ranks(std::span<const std::size_t> a, std::span<const std::size_t> b);

/// (s + eps) / sum(s + eps).
std::vector<double> to_distribution(std::span<const double> strengths, double eps = kKlEpsilon);

/// KL(p || q) in nats; inputs must be strictly positive.
double kl_divergence(std::span<const double> p, std::span<const double> q);

/// (KL(p || q) + KL(q || p)) / 2.
double symmetric_kl(std::span<const double> p, std::span<const double> q);

double euclidean_distance(std::span<const double> a, std::span<const double> b);

/// |a ∩ b| / |a ∪ b| over sorted, duplicate-free index lists. Two empty sets give 1.
double jaccard_index(std::span<const std::size_t> a, std::span<const std::size_t> b);

/// Min-max normalization to [0, 1]; a constant vector maps to all zeros.
std::vector<double> min_max_normalize(std::span<const double> values);

/// A pairwise matrix over models plus its per-model reduction (mean of the
/// model's off-diagonal row).
struct PairwiseScore {
    ScoreId id{};
    ReproMatrix pairwise;
    std::vector<double> per_model;
};

PairwiseScore score_views_average(std::span<const ReproMatrix> view_matrices);
PairwiseScore score_rank_correlation(std::span<const StrengthProfile> profiles);
PairwiseScore score_strength_correlation(std::span<const StrengthProfile> profiles);
PairwiseScore score_accumulated_weights_correlation(std::span<const StrengthProfile> profiles);
PairwiseScore score_accumulated_weighted_intersection(std::span<const StrengthProfile> profiles);
PairwiseScore score_kl(std::span<const StrengthProfile> profiles);
PairwiseScore score_l2(std::span<const StrengthProfile> profiles);

/// `accumulated_sets[run][model]` is the sorted union of the model's top-k
/// sets over all views and thresholds for that run. Jaccard matrices are
/// built per run and averaged.
PairwiseScore score_accumulated_rank_intersection(
    std::vector<std::string> model_ids,
    std::span<const std::vector<std::vector<std::size_t>>> accumulated_sets);

/// All eight scores for every training mode.
struct ScoreTable {
    std::vector<std::string> model_ids;
    std::vector<std::string> mode_ids;
    // [mode][score], scores in kAllScores order.
    std::vector<std::vector<PairwiseScore>> per_mode;

    const PairwiseScore& get(std::size_t mode, ScoreId id) const;
    double scalar(std::size_t mode, ScoreId id, std::size_t model) const;
};

}  // namespace reprosel
