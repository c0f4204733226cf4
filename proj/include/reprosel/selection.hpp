#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "reprosel/repro_matrix.hpp"
#include "reprosel/weight_store.hpp"

namespace reprosel {

/// Strengths closer than this to the maximum count as tied with it.
inline constexpr double kTieTolerance = 1e-9;

struct Selection {
    std::size_t index{};
    std::string model_id;
    std::vector<double> strengths;
    bool tie{false};
};

/// Elementwise sum of the view-average and rank-correlation matrices. With
/// `normalize`, each input's off-diagonal entries are first min-max scaled to
/// [0, 1] (diagonals set to 1).
ReproMatrix build_overall(const ReproMatrix& view_average, const ReproMatrix& rank_correlation,
                          bool normalize = false);

/// Model with the largest node strength. Among strengths within kTieTolerance
/// of the maximum the first in axis order wins, and `tie` is set.
Selection select_model(const ReproMatrix& overall);

/// Mean |w| over every (view, mode, run) record of `model`.
std::vector<double> winner_weights(const WeightStore& store, std::string_view model);

}  // namespace reprosel
