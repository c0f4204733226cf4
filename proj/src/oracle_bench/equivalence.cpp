#include <cmath>

#include "oracle_bench/oracle.hpp"

namespace oracle_bench {

namespace {

void compare_grid(const reprosel::ReproMatrix& main, const Grid& ref, const std::string& what, double tol,
                  std::vector<std::string>& out) {
    if (main.size() != ref.size()) {
        out.push_back(what + ": dimension " + std::to_string(main.size()) + " vs " + std::to_string(ref.size()));
        return;
    }
    for (std::size_t i = 0; i < ref.size(); ++i) {
        for (std::size_t j = 0; j < ref.size(); ++j) {
            const double d = std::fabs(main(i, j) - ref[i][j]);
            if (!(d <= tol)) {
                out.push_back(what + "(" + std::to_string(i) + "," + std::to_string(j) +
                              "): main=" + std::to_string(main(i, j)) + " oracle=" + std::to_string(ref[i][j]));
            }
        }
    }
}

void compare_vector(const std::vector<double>& main, const std::vector<double>& ref, const std::string& what,
                    double tol, std::vector<std::string>& out) {
    if (main.size() != ref.size()) {
        out.push_back(what + ": length mismatch");
        return;
    }
    for (std::size_t i = 0; i < ref.size(); ++i) {
        if (!(std::fabs(main[i] - ref[i]) <= tol)) {
            out.push_back(what + "[" + std::to_string(i) + "]: main=" + std::to_string(main[i]) +
                          " oracle=" + std::to_string(ref[i]));
        }
    }
}

void compare_selection(const reprosel::ModeSelection& main, const OracleModeReport& ref, double tol,
                       std::vector<std::string>& out) {
    const std::string tag = "mode " + ref.mode_id + " ";
    compare_grid(main.view_average, ref.view_average, tag + "view_average", tol, out);
    compare_grid(main.rank_correlation, ref.rank_correlation, tag + "rank_correlation", tol, out);
    compare_grid(main.overall, ref.overall, tag + "overall", tol, out);
    compare_vector(main.selection.strengths, ref.strengths, tag + "strengths", tol, out);
    if (main.selection.index != ref.winner) {
        out.push_back(tag + "winner: main=" + std::to_string(main.selection.index) +
                      " oracle=" + std::to_string(ref.winner));
    }
    if (main.selection.tie != ref.tie) {
        out.push_back(tag + "tie flag differs");
    }
}

}  // namespace

std::vector<std::string> compare_with_oracle(const reprosel::StudyResult& result, const OracleReport& oracle,
                                             double tol) {
    std::vector<std::string> out;
    const auto& report = result.report;
    if (report.per_mode.size() != oracle.modes.size()) {
        out.push_back("mode count differs");
        return out;
    }
    for (std::size_t o = 0; o < oracle.modes.size(); ++o) {
        compare_selection(report.per_mode[o], oracle.modes[o], tol, out);
        for (auto id : reprosel::kAllScores) {
            const std::string label(reprosel::score_label(id));
            const auto& main_score = result.scores.get(o, id);
            const std::string tag = "mode " + oracle.modes[o].mode_id + " " + label;
            compare_grid(main_score.pairwise, oracle.modes[o].score_pairwise.at(label), tag, tol, out);
            compare_vector(main_score.per_model, oracle.modes[o].score_per_model.at(label), tag + " per-model", tol,
                           out);
        }
    }
    compare_selection(report.grand, oracle.grand, tol, out);
    compare_vector(report.winner_weight_profile, oracle.winner_weights, "winner weights", tol, out);
    return out;
}

}  // namespace oracle_bench
