#include "reprosel/selection.hpp"

#include <algorithm>
#include <cmath>

namespace reprosel {

namespace {

ReproMatrix normalized_off_diagonal(const ReproMatrix& m) {
    ReproMatrix out = m;
    const std::size_t n = m.size();
    double lo = 0.0;
    double hi = 0.0;
    bool first = true;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) {
                continue;
            }
            lo = first ? m(i, j) : std::min(lo, m(i, j));
            hi = first ? m(i, j) : std::max(hi, m(i, j));
            first = false;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) {
                out(i, j) = 1.0;
            } else {
                out(i, j) = hi > lo ? (m(i, j) - lo) / (hi - lo) : 0.0;
            }
        }
    }
    return out;
}

}  // namespace

ReproMatrix build_overall(const ReproMatrix& view_average, const ReproMatrix& rank_correlation, bool normalize) {
    if (view_average.axis_ids() != rank_correlation.axis_ids()) {
        throw StudyError("build_overall: axis mismatch");
    }
    const ReproMatrix a = normalize ? normalized_off_diagonal(view_average) : view_average;
    const ReproMatrix b = normalize ? normalized_off_diagonal(rank_correlation) : rank_correlation;
    ReproMatrix out(a.axis_ids(), MatrixKind::overall);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < a.size(); ++j) {
            out(i, j) = a(i, j) + b(i, j);
        }
    }
    return out;
}

Selection select_model(const ReproMatrix& overall) {
    if (overall.size() == 0) {
        throw StudyError("select_model: empty matrix");
    }
    Selection s;
    s.strengths = node_strength(overall);
    const double best = *std::max_element(s.strengths.begin(), s.strengths.end());
    std::size_t contenders = 0;
    bool found = false;
    for (std::size_t i = 0; i < s.strengths.size(); ++i) {
        if (s.strengths[i] >= best - kTieTolerance) {
            ++contenders;
            if (!found) {
                s.index = i;
                found = true;
            }
        }
    }
    s.tie = contenders > 1;
    s.model_id = overall.axis_ids()[s.index];
    return s;
}

std::vector<double> winner_weights(const WeightStore& store, std::string_view model) {
    const auto& config = store.config();
    const auto m = config.model_index(model);
    std::vector<double> sum(config.n_r, 0.0);
    std::size_t count = 0;
    for (std::size_t v = 0; v < config.n_views(); ++v) {
        for (std::size_t o = 0; o < config.n_modes(); ++o) {
            for (const auto& r : store.records_for(m, v, o)) {
                for (std::size_t i = 0; i < config.n_r; ++i) {
                    sum[i] += std::fabs(r.weights[i]);
                }
                ++count;
            }
        }
    }
    for (auto& x : sum) {
        x /= static_cast<double>(count);
    }
    return sum;
}

}  // namespace reprosel
