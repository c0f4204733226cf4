#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "reprosel/ranking.hpp"

namespace reprosel {

enum class MatrixKind {
    view_specific,  // models x models, one view, one threshold
    gnn_specific,   // views x views, one model, one threshold
    averaged,       // mean of overlap-based matrices
    correlation,    // pairwise correlations, entries in [-1, 1]
    overall,        // averaged + correlation
    pairwise_score, // any other pairwise score (distances, divergences)
};

std::string_view to_string(MatrixKind kind);

/// True for the kinds whose entries are top-k overlap ratios.
bool is_overlap_kind(MatrixKind kind);

/// Dense square matrix over labelled axes (models or views).
class ReproMatrix {
public:
    ReproMatrix() = default;
    ReproMatrix(std::vector<std::string> axis_ids, MatrixKind kind, double fill = 0.0);

    std::size_t size() const noexcept { return axis_ids_.size(); }
    const std::vector<std::string>& axis_ids() const noexcept { return axis_ids_; }
    MatrixKind kind() const noexcept { return kind_; }
    void set_kind(MatrixKind kind) noexcept { kind_ = kind; }

    double operator()(std::size_t i, std::size_t j) const { return values_[i * size() + j]; }
    double& operator()(std::size_t i, std::size_t j) { return values_[i * size() + j]; }

    std::span<const double> row(std::size_t i) const {
        return std::span<const double>(values_).subspan(i * size(), size());
    }
    std::span<const double> values() const noexcept { return values_; }

    bool is_symmetric(double tol = 0.0) const;

    /// Reorders both axes: result(i, j) = (*this)(perm[i], perm[j]).
    ReproMatrix permuted(std::span<const std::size_t> perm) const;

    bool operator==(const ReproMatrix&) const = default;

private:
    std::vector<std::string> axis_ids_;
    std::vector<double> values_;
    MatrixKind kind_{MatrixKind::averaged};
};

/// |a ∩ b| / k. Throws StudyError when the thresholds differ.
double overlap_ratio(const TopKSet& a, const TopKSet& b);

/// Pairwise overlap of top-k sets, one set per axis entry. The diagonal is
/// computed like any other entry, so it comes out as exactly 1.
ReproMatrix overlap_matrix(std::span<const BiomarkerRanking> rankings, std::size_t k,
                           std::vector<std::string> axis_ids, MatrixKind kind);

/// Models x models overlap on one view/mode/run; `rankings` in model order.
ReproMatrix view_matrix_at_threshold(std::span<const BiomarkerRanking> rankings, std::size_t k,
                                     std::vector<std::string> model_ids);

/// Views x views overlap for one model/mode/run; `rankings` in view order.
ReproMatrix gnn_matrix_at_threshold(std::span<const BiomarkerRanking> rankings, std::size_t k,
                                    std::vector<std::string> view_ids);

/// Elementwise arithmetic mean, summed in list order. Throws StudyError on an
/// empty list, an axis mismatch, or incompatible kinds.
ReproMatrix average_matrices(std::span<const ReproMatrix> matrices);

/// Off-diagonal row sums.
std::vector<double> node_strength(const ReproMatrix& m);

/// Off-diagonal row means; throws StudyError for a matrix smaller than 2x2.
std::vector<double> off_diagonal_row_means(const ReproMatrix& m);

}  // namespace reprosel
