#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "reprosel/weight_store.hpp"

namespace reprosel {

/// How weights are turned into an ordering of biomarkers.
enum class RankOrder {
    absolute,  // descending |w| (default)
    signed_,   // descending w
};

/// Biomarker indices sorted by descending key; equal keys keep ascending
/// index order.
struct BiomarkerRanking {
    std::vector<std::size_t> order;
    // Sort key of order[t]: |w| for RankOrder::absolute, w for signed ranking.
    std::vector<double> magnitudes;

    std::size_t size() const noexcept { return order.size(); }
    bool operator==(const BiomarkerRanking&) const = default;
};

/// The first k entries of a ranking as a set, stored sorted ascending.
struct TopKSet {
    std::size_t k{};
    std::vector<std::size_t> members;

    bool contains(std::size_t index) const;
    bool operator==(const TopKSet&) const = default;
};

/// Throws StudyError on a non-finite entry.
BiomarkerRanking rank_biomarkers(std::span<const double> weights, RankOrder order = RankOrder::absolute);

/// Throws StudyError unless 1 <= k <= ranking.size().
TopKSet top_k(const BiomarkerRanking& ranking, std::size_t k);

/// One ranking per run of the cell, in run order. Weights are never averaged
/// across runs; aggregation happens on the matrices built from these rankings.
std::vector<BiomarkerRanking> rankings_for_cell(const WeightStore& store, std::string_view model,
                                                std::string_view view, std::string_view mode,
                                                RankOrder order = RankOrder::absolute);

}  // namespace reprosel
