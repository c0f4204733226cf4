#include "reprosel/pipeline.hpp"

#include <algorithm>
#include <set>

namespace reprosel {

namespace {

std::string join_runs(const std::vector<std::uint64_t>& runs) {
    std::string out = "{";
    for (std::size_t i = 0; i < runs.size(); ++i) {
        out += (i ? "," : "") + std::to_string(runs[i]);
    }
    return out + "}";
}

std::vector<std::uint64_t> run_ids_of(std::span<const WeightRecord> records) {
    std::vector<std::uint64_t> ids;
    ids.reserve(records.size());
    for (const auto& r : records) {
        ids.push_back(r.run_id);
    }
    return ids;
}

// rankings[model][view][run] for one mode, after checking run alignment.
std::vector<std::vector<std::vector<BiomarkerRanking>>> mode_rankings(const WeightStore& store, std::size_t mode,
                                                                      RankOrder order,
                                                                      std::vector<std::uint64_t>& run_ids) {
    const auto& cfg = store.config();
    std::vector<std::vector<std::vector<BiomarkerRanking>>> out(cfg.n_models());
    run_ids.clear();
    for (std::size_t m = 0; m < cfg.n_models(); ++m) {
        out[m].resize(cfg.n_views());
        for (std::size_t v = 0; v < cfg.n_views(); ++v) {
            const auto records = store.records_for(m, v, mode);
            auto ids = run_ids_of(records);
            if (m == 0 && v == 0) {
                run_ids = ids;
            } else if (ids != run_ids) {
                throw StudyError("runs not aligned in mode '" + cfg.mode_ids[mode] + "': cell (" +
                                 cfg.model_ids[m] + ", " + cfg.view_ids[v] + ") has runs " + join_runs(ids) +
                                 ", expected " + join_runs(run_ids));
            }
            for (const auto& r : records) {
                out[m][v].push_back(rank_biomarkers(r.weights, order));
            }
        }
    }
    return out;
}

ModeSelection make_selection(std::string mode_id, ReproMatrix view_average, ReproMatrix rank_correlation,
                             bool normalize) {
    ModeSelection s;
    s.mode_id = std::move(mode_id);
    s.overall = build_overall(view_average, rank_correlation, normalize);
    s.view_average = std::move(view_average);
    s.rank_correlation = std::move(rank_correlation);
    s.selection = select_model(s.overall);
    return s;
}

}  // namespace

ModeAnalysis analyze_mode(const WeightStore& store, std::size_t mode, const AnalysisOptions& options) {
    const auto& cfg = store.config();
    ModeAnalysis a;
    a.mode_id = cfg.mode_ids.at(mode);
    const auto rankings = mode_rankings(store, mode, options.rank_order, a.run_ids);
    const std::size_t n_runs = a.run_ids.size();
    const std::size_t n_k = cfg.n_thresholds();

    // View-specific: for each view and run, mean over thresholds; then mean over runs.
    for (std::size_t v = 0; v < cfg.n_views(); ++v) {
        std::vector<ReproMatrix> per_run;
        per_run.reserve(n_runs);
        for (std::size_t run = 0; run < n_runs; ++run) {
            std::vector<BiomarkerRanking> across_models;
            across_models.reserve(cfg.n_models());
            for (std::size_t m = 0; m < cfg.n_models(); ++m) {
                across_models.push_back(rankings[m][v][run]);
            }
            std::vector<ReproMatrix> per_threshold;
            per_threshold.reserve(n_k);
            for (auto k : cfg.thresholds) {
                per_threshold.push_back(view_matrix_at_threshold(across_models, k, cfg.model_ids));
            }
            per_run.push_back(average_matrices(per_threshold));
        }
        a.view_matrices.push_back(average_matrices(per_run));
    }

    // GNN-specific: keep the per-threshold run means for the strength profiles.
    for (std::size_t m = 0; m < cfg.n_models(); ++m) {
        std::vector<std::vector<ReproMatrix>> by_threshold(n_k);
        std::vector<ReproMatrix> per_run;
        per_run.reserve(n_runs);
        for (std::size_t run = 0; run < n_runs; ++run) {
            std::vector<BiomarkerRanking> across_views;
            across_views.reserve(cfg.n_views());
            for (std::size_t v = 0; v < cfg.n_views(); ++v) {
                across_views.push_back(rankings[m][v][run]);
            }
            std::vector<ReproMatrix> per_threshold;
            per_threshold.reserve(n_k);
            for (std::size_t h = 0; h < n_k; ++h) {
                per_threshold.push_back(gnn_matrix_at_threshold(across_views, cfg.thresholds[h], cfg.view_ids));
                by_threshold[h].push_back(per_threshold.back());
            }
            per_run.push_back(average_matrices(per_threshold));
        }
        a.gnn_matrices.push_back(average_matrices(per_run));
        std::vector<ReproMatrix> threshold_means;
        threshold_means.reserve(n_k);
        for (const auto& runs : by_threshold) {
            threshold_means.push_back(average_matrices(runs));
        }
        a.profiles.push_back(make_strength_profile(cfg.model_ids[m], threshold_means));
        a.gnn_threshold_matrices.push_back(std::move(threshold_means));
    }

    a.accumulated_sets.assign(n_runs, std::vector<std::vector<std::size_t>>(cfg.n_models()));
    for (std::size_t run = 0; run < n_runs; ++run) {
        for (std::size_t m = 0; m < cfg.n_models(); ++m) {
            std::set<std::size_t> acc;
            for (std::size_t v = 0; v < cfg.n_views(); ++v) {
                for (auto k : cfg.thresholds) {
                    const auto set = top_k(rankings[m][v][run], k);
                    acc.insert(set.members.begin(), set.members.end());
                }
            }
            a.accumulated_sets[run][m].assign(acc.begin(), acc.end());
        }
    }
    return a;
}

std::vector<PairwiseScore> compute_scores(const ModeAnalysis& analysis) {
    std::vector<std::string> model_ids;
    for (const auto& p : analysis.profiles) {
        model_ids.push_back(p.model_id);
    }
    std::vector<PairwiseScore> out;
    out.reserve(kAllScores.size());
    for (auto id : kAllScores) {
        switch (id) {
        case ScoreId::views_average:
            out.push_back(score_views_average(analysis.view_matrices));
            break;
        case ScoreId::rank_correlation:
            out.push_back(score_rank_correlation(analysis.profiles));
            break;
        case ScoreId::accumulated_weighted_intersection:
            out.push_back(score_accumulated_weighted_intersection(analysis.profiles));
            break;
        case ScoreId::accumulated_weights_correlation:
            out.push_back(score_accumulated_weights_correlation(analysis.profiles));
            break;
        case ScoreId::strength_correlation:
            out.push_back(score_strength_correlation(analysis.profiles));
            break;
        case ScoreId::accumulated_rank_intersection:
            out.push_back(score_accumulated_rank_intersection(model_ids, analysis.accumulated_sets));
            break;
        case ScoreId::kl_divergence:
            out.push_back(score_kl(analysis.profiles));
            break;
        case ScoreId::l2_distance:
            out.push_back(score_l2(analysis.profiles));
            break;
        }
    }
    return out;
}

StudyResult run_pipeline(const WeightStore& store, const AnalysisOptions& options) {
    const auto& cfg = store.config();
    if (cfg.n_models() < 2) {
        throw StudyError("at least two models are needed to compare reproducibility");
    }
    if (cfg.n_views() < 2) {
        throw StudyError("at least two views are needed to rank views");
    }

    StudyResult result;
    result.scores.model_ids = cfg.model_ids;
    result.scores.mode_ids = cfg.mode_ids;
    auto& report = result.report;
    report.model_ids = cfg.model_ids;

    for (std::size_t o = 0; o < cfg.n_modes(); ++o) {
        result.modes.push_back(analyze_mode(store, o, options));
        auto scores = compute_scores(result.modes.back());
        ReproMatrix view_average = scores[0].pairwise;
        ReproMatrix rank_correlation = scores[1].pairwise;
        report.per_mode.push_back(make_selection(cfg.mode_ids[o], std::move(view_average),
                                                 std::move(rank_correlation), options.normalize_overall));
        result.scores.per_mode.push_back(std::move(scores));
    }

    // Grand mean across modes.
    std::vector<ReproMatrix> view_averages;
    for (const auto& s : report.per_mode) {
        view_averages.push_back(s.view_average);
    }
    std::vector<StrengthProfile> grand_profiles;
    for (std::size_t m = 0; m < cfg.n_models(); ++m) {
        std::vector<ReproMatrix> threshold_means;
        for (std::size_t h = 0; h < cfg.n_thresholds(); ++h) {
            std::vector<ReproMatrix> across_modes;
            for (const auto& mode : result.modes) {
                across_modes.push_back(mode.gnn_threshold_matrices[m][h]);
            }
            threshold_means.push_back(average_matrices(across_modes));
        }
        grand_profiles.push_back(make_strength_profile(cfg.model_ids[m], threshold_means));
    }
    report.grand = make_selection("grand", average_matrices(view_averages),
                                  score_rank_correlation(grand_profiles).pairwise, options.normalize_overall);

    report.modes_agree = std::all_of(report.per_mode.begin(), report.per_mode.end(), [&](const ModeSelection& s) {
        return s.selection.index == report.per_mode.front().selection.index;
    });
    report.winner_weight_profile = winner_weights(store, report.grand.selection.model_id);

    auto& prov = report.provenance;
    prov.aggregation_steps = {
        "overlap matrices per (view or model, mode, run, threshold)",
        "mean over thresholds",
        "mean over runs (paired by run id)",
        "mean over views (view-specific matrices only)",
        "view ranks from node strengths of GNN-specific matrices; Spearman correlation across models",
        "overall = view_average + rank_correlation",
        "grand: mean over modes of view_average and of GNN-specific threshold matrices",
    };
    prov.model_pool = cfg.model_ids;
    prov.views = cfg.view_ids;
    prov.modes = cfg.mode_ids;
    prov.thresholds = cfg.thresholds;
    prov.n_r = cfg.n_r;
    for (const auto& mode : result.modes) {
        prov.run_ids.push_back(mode.run_ids);
    }
    prov.rank_order = options.rank_order;
    prov.normalize_overall = options.normalize_overall;
    return result;
}

}  // namespace reprosel
