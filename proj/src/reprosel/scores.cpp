#include "reprosel/scores.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace reprosel {

std::string_view score_label(ScoreId id) {
    switch (id) {
    case ScoreId::views_average:
        return "v.a";
    case ScoreId::rank_correlation:
        return "r.c";
    case ScoreId::accumulated_weighted_intersection:
        return "a.w.i";
    case ScoreId::accumulated_weights_correlation:
        return "a.w.c";
    case ScoreId::strength_correlation:
        return "s.c";
    case ScoreId::accumulated_rank_intersection:
        return "a.r.i";
    case ScoreId::kl_divergence:
        return "KL";
    case ScoreId::l2_distance:
        return "L2";
    }
    return "?";
}

std::optional<ScoreId> score_from_label(std::string_view label) {
    for (auto id : kAllScores) {
        if (score_label(id) == label) {
            return id;
        }
    }
    return std::nullopt;
}

Polarity score_polarity(ScoreId id) {
    return (id == ScoreId::kl_divergence || id == ScoreId::l2_distance) ? Polarity::lower_better
                                                                        : Polarity::higher_better;
}

std::vector<std::size_t> descending_ranks(std::span<const double> values) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
    // Snap values within kRankTieTolerance of a cluster's leading value to that
    // value, then order clusters by value and members by index.
    std::vector<double> snapped(values.begin(), values.end());
    for (std::size_t pos = 0; pos < order.size();) {
        const double lead = values[order[pos]];
        std::size_t end = pos;
        while (end < order.size() && lead - values[order[end]] <= kRankTieTolerance) {
            snapped[order[end]] = lead;
            ++end;
        }
        pos = end;
    }
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return snapped[a] > snapped[b]; });
    std::vector<std::size_t> ranks(values.size());
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
        ranks[order[pos]] = pos + 1;
    }
    return ranks;
}

StrengthProfile make_strength_profile(std::string model_id, std::span<const ReproMatrix> per_threshold) {
    if (per_threshold.empty()) {
        throw StudyError("strength profile needs at least one threshold matrix");
    }
    StrengthProfile p;
    p.model_id = std::move(model_id);
    const std::size_t n_v = per_threshold.front().size();
    p.mean_strengths.assign(n_v, 0.0);
    for (const auto& m : per_threshold) {
        if (m.size() != n_v) {
            throw StudyError("strength profile: threshold matrices differ in size");
        }
        auto s = node_strength(m);
        for (std::size_t v = 0; v < n_v; ++v) {
            p.mean_strengths[v] += s[v];
        }
        p.accumulated_strengths.insert(p.accumulated_strengths.end(), s.begin(), s.end());
        p.per_threshold_strengths.push_back(std::move(s));
    }
    for (auto& s : p.mean_strengths) {
        s /= static_cast<double>(per_threshold.size());
    }
    p.view_ranks = descending_ranks(p.mean_strengths);
    return p;
}

namespace {

bool is_constant(std::span<const double> v) {
    if (v.empty()) {
        return true;
    }
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return (*hi - *lo) <= kConstantTolerance * std::max(1.0, std::fabs(*hi));
}

double mean_of(std::span<const double> v) {
    double sum = 0.0;
    for (double x : v) {
        sum += x;
    }
    return sum / static_cast<double>(v.size());
}

void require_same_length(std::size_t a, std::size_t b, std::string_view what) {
    if (a != b) {
        throw StudyError(std::string(what) + ": length mismatch (" + std::to_string(a) + " vs " +
                         std::to_string(b) + ")");
    }
}

std::vector<std::string> model_ids_of(std::span<const StrengthProfile> profiles) {
    std::vector<std::string> ids;
    ids.reserve(profiles.size());
    for (const auto& p : profiles) {
        ids.push_back(p.model_id);
    }
    return ids;
}

template <typename Pair>
PairwiseScore pairwise_score(ScoreId id, std::vector<std::string> ids, MatrixKind kind, double self_value,
                             Pair&& pair) {
    PairwiseScore out{id, ReproMatrix(std::move(ids), kind), {}};
    auto& m = out.pairwise;
    for (std::size_t i = 0; i < m.size(); ++i) {
        m(i, i) = self_value;
        for (std::size_t j = i + 1; j < m.size(); ++j) {
            const double v = pair(i, j);
            m(i, j) = v;
            m(j, i) = v;
        }
    }
    out.per_model = off_diagonal_row_means(m);
    return out;
}

void require_views(std::span<const StrengthProfile> profiles, std::size_t min_views, std::string_view what) {
    if (profiles.empty()) {
        throw StudyError(std::string(what) + ": no models");
    }
    for (const auto& p : profiles) {
        if (p.n_views() < min_views) {
            throw StudyError(std::string(what) + ": needs at least " + std::to_string(min_views) + " views");
        }
        if (p.n_views() != profiles.front().n_views() || p.n_thresholds() != profiles.front().n_thresholds()) {
            throw StudyError(std::string(what) + ": profiles differ in shape");
        }
    }
}

}  // namespace

double pearson_correlation(std::span<const double> a, std::span<const double> b) {
    require_same_length(a.size(), b.size(), "pearson_correlation");
    if (a.size() < 2 || is_constant(a) || is_constant(b)) {
        return 0.0;
    }
    const double ma = mean_of(a);
    const double mb = mean_of(b);
    double sab = 0.0;
    double saa = 0.0;
    double sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double da = a[i] - ma;
        const double db = b[i] - mb;
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

double spearman_of_ranks(std::span<const std::size_t> a, std::span<const std::size_t> b) {
    std::vector<double> ra(a.begin(), a.end());
    std::vector<double> rb(b.begin(), b.end());
    return pearson_correlation(ra, rb);
}

std::vector<double> to_distribution(std::span<const double> strengths, double eps) {
    std::vector<double> p(strengths.size());
    double total = 0.0;
    for (std::size_t i = 0; i < strengths.size(); ++i) {
        if (strengths[i] < 0.0) {
            throw StudyError("to_distribution: negative strength");
        }
        p[i] = strengths[i] + eps;
        total += p[i];
    }
    for (auto& x : p) {
        x /= total;
    }
    return p;
}

double kl_divergence(std::span<const double> p, std::span<const double> q) {
    require_same_length(p.size(), q.size(), "kl_divergence");
    double d = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (!(p[i] > 0.0) || !(q[i] > 0.0)) {
            throw StudyError("kl_divergence: entries must be strictly positive");
        }
        d += p[i] * std::log(p[i] / q[i]);
    }
    return d;
}

double symmetric_kl(std::span<const double> p, std::span<const double> q) {
    return 0.5 * (kl_divergence(p, q) + kl_divergence(q, p));
}

double euclidean_distance(std::span<const double> a, std::span<const double> b) {
    require_same_length(a.size(), b.size(), "euclidean_distance");
    double ss = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        ss += d * d;
    }
    return std::sqrt(ss);
}

double jaccard_index(std::span<const std::size_t> a, std::span<const std::size_t> b) {
    std::size_t shared = 0;
    std::size_t ia = 0;
    std::size_t ib = 0;
    while (ia < a.size() && ib < b.size()) {
        if (a[ia] < b[ib]) {
            ++ia;
        } else if (b[ib] < a[ia]) {
            ++ib;
        } else {
            ++shared;
            ++ia;
            ++ib;
        }
    }
    const std::size_t united = a.size() + b.size() - shared;
    return united == 0 ? 1.0 : static_cast<double>(shared) / static_cast<double>(united);
}

std::vector<double> min_max_normalize(std::span<const double> values) {
    std::vector<double> out(values.size(), 0.0);
    if (values.empty() || is_constant(values)) {
        return out;
    }
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    const double range = *hi - *lo;
    for (std::size_t i = 0; i < values.size(); ++i) {
        out[i] = (values[i] - *lo) / range;
    }
    return out;
}

PairwiseScore score_views_average(std::span<const ReproMatrix> view_matrices) {
    PairwiseScore out{ScoreId::views_average, average_matrices(view_matrices), {}};
    out.per_model = off_diagonal_row_means(out.pairwise);
    return out;
}

PairwiseScore score_rank_correlation(std::span<const StrengthProfile> profiles) {
    require_views(profiles, 2, "rank correlation");
    return pairwise_score(ScoreId::rank_correlation, model_ids_of(profiles), MatrixKind::correlation, 1.0,
                          [&](std::size_t i, std::size_t j) {
                              return spearman_of_ranks(profiles[i].view_ranks, profiles[j].view_ranks);
                          });
}

PairwiseScore score_strength_correlation(std::span<const StrengthProfile> profiles) {
    require_views(profiles, 1, "strength correlation");
    return pairwise_score(ScoreId::strength_correlation, model_ids_of(profiles), MatrixKind::correlation, 1.0,
                          [&](std::size_t i, std::size_t j) {
                              return pearson_correlation(profiles[i].mean_strengths, profiles[j].mean_strengths);
                          });
}

PairwiseScore score_accumulated_weights_correlation(std::span<const StrengthProfile> profiles) {
    require_views(profiles, 1, "accumulated weights correlation");
    return pairwise_score(ScoreId::accumulated_weights_correlation, model_ids_of(profiles), MatrixKind::correlation,
                          1.0, [&](std::size_t i, std::size_t j) {
                              return pearson_correlation(profiles[i].accumulated_strengths,
                                                         profiles[j].accumulated_strengths);
                          });
}

PairwiseScore score_accumulated_weighted_intersection(std::span<const StrengthProfile> profiles) {
    require_views(profiles, 2, "accumulated weighted intersection");
    std::vector<std::vector<double>> normalized;
    normalized.reserve(profiles.size());
    for (const auto& p : profiles) {
        normalized.push_back(min_max_normalize(p.accumulated_strengths));
    }
    const std::size_t n_v = profiles.front().n_views();
    const std::size_t n_k = profiles.front().n_thresholds();
    const double rank_span = static_cast<double>(n_v - 1);
    return pairwise_score(
        ScoreId::accumulated_weighted_intersection, model_ids_of(profiles), MatrixKind::pairwise_score, 1.0,
        [&](std::size_t i, std::size_t j) {
            double sum = 0.0;
            for (std::size_t t = 0; t < n_k; ++t) {
                for (std::size_t v = 0; v < n_v; ++v) {
                    const double strength_term = 1.0 - std::fabs(normalized[i][t * n_v + v] - normalized[j][t * n_v + v]);
                    const double rank_gap = std::fabs(static_cast<double>(profiles[i].view_ranks[v]) -
                                                      static_cast<double>(profiles[j].view_ranks[v]));
                    sum += strength_term * (1.0 - rank_gap / rank_span);
                }
            }
            return sum / static_cast<double>(n_v * n_k);
        });
}

PairwiseScore score_kl(std::span<const StrengthProfile> profiles) {
    require_views(profiles, 1, "KL divergence");
    std::vector<std::vector<double>> dists;
    dists.reserve(profiles.size());
    for (const auto& p : profiles) {
        dists.push_back(to_distribution(p.mean_strengths));
    }
    return pairwise_score(ScoreId::kl_divergence, model_ids_of(profiles), MatrixKind::pairwise_score, 0.0,
                          [&](std::size_t i, std::size_t j) { return symmetric_kl(dists[i], dists[j]); });
}

PairwiseScore score_l2(std::span<const StrengthProfile> profiles) {
    require_views(profiles, 1, "L2 distance");
    return pairwise_score(ScoreId::l2_distance, model_ids_of(profiles), MatrixKind::pairwise_score, 0.0,
                          [&](std::size_t i, std::size_t j) {
                              return euclidean_distance(profiles[i].accumulated_strengths,
                                                        profiles[j].accumulated_strengths);
                          });
}

PairwiseScore score_accumulated_rank_intersection(
    std::vector<std::string> model_ids, std::span<const std::vector<std::vector<std::size_t>>> accumulated_sets) {
    if (accumulated_sets.empty()) {
        throw StudyError("accumulated rank intersection: no runs");
    }
    std::vector<ReproMatrix> per_run;
    per_run.reserve(accumulated_sets.size());
    for (const auto& run : accumulated_sets) {
        require_same_length(run.size(), model_ids.size(), "accumulated rank intersection");
        ReproMatrix m(model_ids, MatrixKind::averaged);
        for (std::size_t i = 0; i < run.size(); ++i) {
            for (std::size_t j = i; j < run.size(); ++j) {
                const double v = jaccard_index(run[i], run[j]);
                m(i, j) = v;
                m(j, i) = v;
            }
        }
        per_run.push_back(std::move(m));
    }
    PairwiseScore out{ScoreId::accumulated_rank_intersection, average_matrices(per_run), {}};
    out.pairwise.set_kind(MatrixKind::pairwise_score);
    out.per_model = off_diagonal_row_means(out.pairwise);
    return out;
}

const PairwiseScore& ScoreTable::get(std::size_t mode, ScoreId id) const {
    for (const auto& s : per_mode.at(mode)) {
        if (s.id == id) {
            return s;
        }
    }
    throw StudyError("score " + std::string(score_label(id)) + " not computed");
}

double ScoreTable::scalar(std::size_t mode, ScoreId id, std::size_t model) const {
    return get(mode, id).per_model.at(model);
}

}  // namespace reprosel
