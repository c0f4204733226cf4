#include <doctest.h>

#include <vector>

#include "oracle_bench/oracle.hpp"
#include "oracle_bench/rng.hpp"
#include "reprosel/ranking.hpp"
#include "reprosel/repro_matrix.hpp"

using namespace reprosel;

namespace {

TopKSet set_of(std::vector<std::size_t> members) { return TopKSet{members.size(), std::move(members)}; }

// Ranking whose top-k is exactly `top` (in that order), rest in index order.
BiomarkerRanking ranking_with_top(std::size_t n, const std::vector<std::size_t>& top) {
    std::vector<double> w(n, 0.0);
    for (std::size_t t = 0; t < top.size(); ++t) {
        w[top[t]] = static_cast<double>(top.size() - t);
    }
    return rank_biomarkers(w);
}

ReproMatrix from_rows(const std::vector<std::vector<double>>& rows, MatrixKind kind = MatrixKind::averaged) {
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        ids.push_back("a" + std::to_string(i));
    }
    ReproMatrix m(ids, kind);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < rows.size(); ++j) {
            m(i, j) = rows[i][j];
        }
    }
    return m;
}

}  // namespace

TEST_CASE("overlap_ratio") {
    CHECK(overlap_ratio(set_of({1, 2, 3}), set_of({1, 2, 3})) == 1.0);
    CHECK(overlap_ratio(set_of({1, 2, 3}), set_of({4, 5, 6})) == 0.0);
    CHECK(overlap_ratio(set_of({0, 1, 2, 3, 4}), set_of({3, 4, 5, 6, 7})) == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(overlap_ratio(set_of({0, 1, 2, 3, 4}), set_of({3, 4, 5, 6, 7})) ==
          oracle_bench::oracle_overlap({0, 1, 2, 3, 4}, {3, 4, 5, 6, 7}, 5));
    CHECK_THROWS_AS(overlap_ratio(set_of({1, 2}), set_of({1, 2, 3})), StudyError);
}

TEST_CASE("view matrix, 3 models, n_r=6, k=2") {
    std::vector<BiomarkerRanking> rs{ranking_with_top(6, {0, 1}), ranking_with_top(6, {1, 2}),
                                     ranking_with_top(6, {0, 1})};
    const auto m = view_matrix_at_threshold(rs, 2, {"g0", "g1", "g2"});
    CHECK(m.kind() == MatrixKind::view_specific);
    CHECK(m(0, 1) == 0.5);
    CHECK(m(0, 2) == 1.0);
    CHECK(m(1, 2) == 0.5);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(m(i, i) == 1.0);
    }
    CHECK(m.is_symmetric());
}

TEST_CASE("view matrix extremes") {
    std::vector<double> w{0.3, 0.1, 0.9, 0.4};
    std::vector<BiomarkerRanking> same{rank_biomarkers(w), rank_biomarkers(w), rank_biomarkers(w)};
    const auto ones = view_matrix_at_threshold(same, 2, {"a", "b", "c"});
    for (double x : ones.values()) {
        CHECK(x == 1.0);
    }
    std::vector<BiomarkerRanking> disjoint{ranking_with_top(4, {0, 1}), ranking_with_top(4, {2, 3})};
    const auto m = view_matrix_at_threshold(disjoint, 2, {"a0", "a1"});
    CHECK(m == from_rows({{1, 0}, {0, 1}}, MatrixKind::view_specific));
}

TEST_CASE("gnn matrix, 4 views, k=3, against the oracle") {
    const std::vector<std::vector<std::size_t>> tops{{0, 1, 2}, {2, 3, 4}, {0, 2, 5}, {6, 7, 8}};
    std::vector<BiomarkerRanking> rs;
    for (const auto& t : tops) {
        rs.push_back(ranking_with_top(9, t));
    }
    const auto m = gnn_matrix_at_threshold(rs, 3, {"v0", "v1", "v2", "v3"});
    CHECK(m.kind() == MatrixKind::gnn_specific);
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            CHECK(m(i, j) == oracle_bench::oracle_overlap(tops[i], tops[j], 3));
        }
    }
    CHECK(m(0, 2) == doctest::Approx(2.0 / 3.0));
    CHECK(m(0, 3) == 0.0);
}

TEST_CASE("average_matrices") {
    const auto ones = from_rows({{1, 1}, {1, 1}});
    const auto eye = from_rows({{1, 0}, {0, 1}});
    std::vector<ReproMatrix> a{ones, ones};
    CHECK(average_matrices(a) == ones);
    std::vector<ReproMatrix> b{eye, ones};
    CHECK(average_matrices(b) == from_rows({{1, 0.5}, {0.5, 1}}));

    std::vector<ReproMatrix> none;
    CHECK_THROWS_AS(average_matrices(none), StudyError);
    std::vector<ReproMatrix> mismatch{ones, from_rows({{1, 1, 1}, {1, 1, 1}, {1, 1, 1}})};
    CHECK_THROWS_AS(average_matrices(mismatch), StudyError);
    auto relabeled = ReproMatrix({"x", "y"}, MatrixKind::averaged, 1.0);
    std::vector<ReproMatrix> labels{ones, relabeled};
    CHECK_THROWS_AS(average_matrices(labels), StudyError);
    std::vector<ReproMatrix> kinds{ones, from_rows({{1, 0}, {0, 1}}, MatrixKind::correlation)};
    CHECK_THROWS_AS(average_matrices(kinds), StudyError);
}

TEST_CASE("chance-level average over thresholds") {
    // E[|A ∩ B|] / k = k / n_r for independent uniform k-sets.
    oracle_bench::Rng rng(5);
    const std::size_t n_r = 35;
    double total = 0;
    const int trials = 4000;
    for (int t = 0; t < trials; ++t) {
        std::vector<double> a(n_r), b(n_r);
        for (std::size_t i = 0; i < n_r; ++i) {
            a[i] = rng.uniform(-1, 1);
            b[i] = rng.uniform(-1, 1);
        }
        std::vector<BiomarkerRanking> rs{rank_biomarkers(a), rank_biomarkers(b)};
        std::vector<ReproMatrix> per_k;
        for (std::size_t k : {5, 10, 15, 20}) {
            per_k.push_back(view_matrix_at_threshold(rs, k, {"a", "b"}));
        }
        total += average_matrices(per_k)(0, 1);
    }
    CHECK(total / trials == doctest::Approx(12.5 / 35).epsilon(0.02));
}

TEST_CASE("node_strength") {
    CHECK(node_strength(from_rows({{1, 0.5}, {0.5, 1}})) == std::vector<double>{0.5, 0.5});
    CHECK(node_strength(from_rows({{1, 1, 1}, {1, 1, 1}, {1, 1, 1}})) == std::vector<double>{2, 2, 2});
    CHECK(node_strength(from_rows({{1, 0.2, 0.8}, {0.2, 1, 0}, {0.8, 0, 1}}))[0] == doctest::Approx(1.0));
    CHECK(off_diagonal_row_means(from_rows({{1, 0.2, 0.8}, {0.2, 1, 0}, {0.8, 0, 1}}))[0] == doctest::Approx(0.5));
    CHECK_THROWS_AS(off_diagonal_row_means(from_rows({{1}})), StudyError);
}

TEST_CASE("permuted matrix") {
    const auto m = from_rows({{1, 0.2, 0.8}, {0.2, 1, 0.1}, {0.8, 0.1, 1}});
    const std::vector<std::size_t> perm{2, 0, 1};
    const auto p = m.permuted(perm);
    CHECK(p.axis_ids() == std::vector<std::string>{"a2", "a0", "a1"});
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
            CHECK(p(i, j) == m(perm[i], perm[j]));
        }
    }
}

TEST_CASE("overlap matrix invariants on random rankings") {
    oracle_bench::Rng rng(99);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 3 + rng.below(20);
        const std::size_t n_axis = 2 + rng.below(5);
        const std::size_t k = 1 + rng.below(n);
        std::vector<BiomarkerRanking> rs;
        std::vector<std::string> ids;
        for (std::size_t a = 0; a < n_axis; ++a) {
            std::vector<double> w(n);
            for (auto& x : w) {
                x = rng.uniform(-1, 1);
            }
            rs.push_back(rank_biomarkers(w));
            ids.push_back("x" + std::to_string(a));
        }
        const auto m = view_matrix_at_threshold(rs, k, ids);
        CHECK(m.is_symmetric());
        for (std::size_t i = 0; i < n_axis; ++i) {
            CHECK(m(i, i) == 1.0);
            for (std::size_t j = 0; j < n_axis; ++j) {
                CHECK(m(i, j) >= 0.0);
                CHECK(m(i, j) <= 1.0);
                // Multiples of 1/k.
                const double scaled = m(i, j) * static_cast<double>(k);
                CHECK(std::abs(scaled - std::round(scaled)) < 1e-12);
            }
        }
        // Making one axis entry copy another forces their overlap to 1.
        rs[1] = rs[0];
        CHECK(view_matrix_at_threshold(rs, k, ids)(0, 1) == 1.0);
    }
}
