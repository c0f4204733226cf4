#include "reprosel/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace reprosel {

bool TopKSet::contains(std::size_t index) const {
    return std::binary_search(members.begin(), members.end(), index);
}

BiomarkerRanking rank_biomarkers(std::span<const double> weights, RankOrder order) {
    std::vector<double> keys(weights.size());
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (!std::isfinite(weights[i])) {
            throw StudyError("cannot rank: non-finite weight at index " + std::to_string(i));
        }
        keys[i] = order == RankOrder::absolute ? std::fabs(weights[i]) : weights[i];
    }
    BiomarkerRanking ranking;
    ranking.order.resize(weights.size());
    std::iota(ranking.order.begin(), ranking.order.end(), std::size_t{0});
    // Stable sort on descending key keeps ascending index order among ties.
    std::stable_sort(ranking.order.begin(), ranking.order.end(),
                     [&](std::size_t a, std::size_t b) { return keys[a] > keys[b]; });
    ranking.magnitudes.reserve(weights.size());
    for (auto idx : ranking.order) {
        ranking.magnitudes.push_back(keys[idx]);
    }
    return ranking;
}

TopKSet top_k(const BiomarkerRanking& ranking, std::size_t k) {
    if (k < 1 || k > ranking.size()) {
        throw StudyError("top-k threshold " + std::to_string(k) + " outside [1, " +
                         std::to_string(ranking.size()) + "]");
    }
    TopKSet set{k, {ranking.order.begin(), ranking.order.begin() + static_cast<std::ptrdiff_t>(k)}};
    std::sort(set.members.begin(), set.members.end());
    return set;
}

std::vector<BiomarkerRanking> rankings_for_cell(const WeightStore& store, std::string_view model,
                                                std::string_view view, std::string_view mode, RankOrder order) {
    const auto records = store.records_for(model, view, mode);
    std::vector<BiomarkerRanking> out;
    out.reserve(records.size());
    for (const auto& r : records) {
        out.push_back(rank_biomarkers(r.weights, order));
    }
    return out;
}

}  // namespace reprosel
