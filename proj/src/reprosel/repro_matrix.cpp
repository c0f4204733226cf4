#include "reprosel/repro_matrix.hpp"

#include <algorithm>
#include <cmath>

namespace reprosel {

std::string_view to_string(MatrixKind kind) {
    switch (kind) {
    case MatrixKind::view_specific:
        return "view_specific";
    case MatrixKind::gnn_specific:
        return "gnn_specific";
    case MatrixKind::averaged:
        return "averaged";
    case MatrixKind::correlation:
        return "correlation";
    case MatrixKind::overall:
        return "overall";
    case MatrixKind::pairwise_score:
        return "pairwise_score";
    }
    return "unknown";
}

bool is_overlap_kind(MatrixKind kind) {
    return kind == MatrixKind::view_specific || kind == MatrixKind::gnn_specific || kind == MatrixKind::averaged;
}

ReproMatrix::ReproMatrix(std::vector<std::string> axis_ids, MatrixKind kind, double fill)
    : axis_ids_(std::move(axis_ids)), values_(axis_ids_.size() * axis_ids_.size(), fill), kind_(kind) {}

bool ReproMatrix::is_symmetric(double tol) const {
    for (std::size_t i = 0; i < size(); ++i) {
        for (std::size_t j = i + 1; j < size(); ++j) {
            if (std::fabs((*this)(i, j) - (*this)(j, i)) > tol) {
                return false;
            }
        }
    }
    return true;
}

ReproMatrix ReproMatrix::permuted(std::span<const std::size_t> perm) const {
    if (perm.size() != size()) {
        throw StudyError("permutation size does not match matrix dimension");
    }
    std::vector<std::string> ids;
    ids.reserve(size());
    for (auto p : perm) {
        ids.push_back(axis_ids_.at(p));
    }
    ReproMatrix out(std::move(ids), kind_);
    for (std::size_t i = 0; i < size(); ++i) {
        for (std::size_t j = 0; j < size(); ++j) {
            out(i, j) = (*this)(perm[i], perm[j]);
        }
    }
    return out;
}

double overlap_ratio(const TopKSet& a, const TopKSet& b) {
    if (a.k != b.k) {
        throw StudyError("overlap_ratio: mismatched thresholds " + std::to_string(a.k) + " and " +
                         std::to_string(b.k));
    }
    // Both member lists are sorted ascending.
    std::size_t shared = 0;
    auto ia = a.members.begin();
    auto ib = b.members.begin();
    while (ia != a.members.end() && ib != b.members.end()) {
        if (*ia < *ib) {
            ++ia;
        } else if (*ib < *ia) {
            ++ib;
        } else {
            ++shared;
            ++ia;
            ++ib;
        }
    }
    return static_cast<double>(shared) / static_cast<double>(a.k);
}

ReproMatrix overlap_matrix(std::span<const BiomarkerRanking> rankings, std::size_t k,
                           std::vector<std::string> axis_ids, MatrixKind kind) {
    if (rankings.size() != axis_ids.size()) {
        throw StudyError("overlap_matrix: " + std::to_string(rankings.size()) + " rankings for " +
                         std::to_string(axis_ids.size()) + " axis entries");
    }
    std::vector<TopKSet> sets;
    sets.reserve(rankings.size());
    for (const auto& r : rankings) {
        sets.push_back(top_k(r, k));
    }
    ReproMatrix m(std::move(axis_ids), kind);
    for (std::size_t i = 0; i < sets.size(); ++i) {
        for (std::size_t j = i; j < sets.size(); ++j) {
            const double p = overlap_ratio(sets[i], sets[j]);
            m(i, j) = p;
            m(j, i) = p;
        }
    }
    return m;
}

ReproMatrix view_matrix_at_threshold(std::span<const BiomarkerRanking> rankings, std::size_t k,
                                     std::vector<std::string> model_ids) {
    return overlap_matrix(rankings, k, std::move(model_ids), MatrixKind::view_specific);
}

ReproMatrix gnn_matrix_at_threshold(std::span<const BiomarkerRanking> rankings, std::size_t k,
                                    std::vector<std::string> view_ids) {
    return overlap_matrix(rankings, k, std::move(view_ids), MatrixKind::gnn_specific);
}

ReproMatrix average_matrices(std::span<const ReproMatrix> matrices) {
    if (matrices.empty()) {
        throw StudyError("average_matrices: empty list");
    }
    const auto& first = matrices.front();
    const bool overlap = is_overlap_kind(first.kind());
    for (const auto& m : matrices) {
        if (m.axis_ids() != first.axis_ids()) {
            throw StudyError("average_matrices: axis mismatch");
        }
        if (is_overlap_kind(m.kind()) != overlap || (!overlap && m.kind() != first.kind())) {
            throw StudyError("average_matrices: cannot average " + std::string(to_string(first.kind())) +
                             " with " + std::string(to_string(m.kind())));
        }
    }
    ReproMatrix out(first.axis_ids(), overlap ? MatrixKind::averaged : first.kind());
    const std::size_t n = first.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double sum = 0.0;
            for (const auto& m : matrices) {
                sum += m(i, j);
            }
            out(i, j) = sum / static_cast<double>(matrices.size());
        }
    }
    return out;
}

std::vector<double> node_strength(const ReproMatrix& m) {
    std::vector<double> strength(m.size(), 0.0);
    for (std::size_t i = 0; i < m.size(); ++i) {
        for (std::size_t j = 0; j < m.size(); ++j) {
            if (j != i) {
                strength[i] += m(i, j);
            }
        }
    }
    return strength;
}

std::vector<double> off_diagonal_row_means(const ReproMatrix& m) {
    if (m.size() < 2) {
        throw StudyError("off-diagonal mean needs at least two axis entries");
    }
    auto out = node_strength(m);
    for (auto& v : out) {
        v /= static_cast<double>(m.size() - 1);
    }
    return out;
}

}  // namespace reprosel
