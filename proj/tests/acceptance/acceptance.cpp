// Acceptance runner: prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "oracle_bench/oracle.hpp"
#include "oracle_bench/rng.hpp"
#include "oracle_bench/synthetic.hpp"
#include "reprosel/cli.hpp"
#include "reprosel/pipeline.hpp"
#include "reprosel/ranking.hpp"
#include "reprosel/repro_matrix.hpp"
#include "reprosel/scores.hpp"

using namespace reprosel;
using oracle_bench::Scenario;
using oracle_bench::SyntheticStudySpec;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass{false};
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* pattern, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, pattern, x);
    return buf;
}

// Every matrix the pipeline produces, flattened with a name, for exact or
// tolerance comparisons between two runs.
std::vector<std::pair<std::string, const ReproMatrix*>> all_matrices(const StudyResult& r) {
    std::vector<std::pair<std::string, const ReproMatrix*>> out;
    for (std::size_t o = 0; o < r.modes.size(); ++o) {
        const auto& m = r.modes[o];
        const std::string tag = m.mode_id + "/";
        for (std::size_t v = 0; v < m.view_matrices.size(); ++v) {
            out.emplace_back(tag + "view" + std::to_string(v), &m.view_matrices[v]);
        }
        for (std::size_t g = 0; g < m.gnn_matrices.size(); ++g) {
            out.emplace_back(tag + "gnn" + std::to_string(g), &m.gnn_matrices[g]);
            for (std::size_t t = 0; t < m.gnn_threshold_matrices[g].size(); ++t) {
                out.emplace_back(tag + "gnn" + std::to_string(g) + "@" + std::to_string(t),
                                 &m.gnn_threshold_matrices[g][t]);
            }
        }
        for (const auto& s : r.scores.per_mode[o]) {
            out.emplace_back(tag + std::string(score_label(s.id)), &s.pairwise);
        }
        const auto& sel = r.report.per_mode[o];
        out.emplace_back(tag + "view_average", &sel.view_average);
        out.emplace_back(tag + "rank_correlation", &sel.rank_correlation);
        out.emplace_back(tag + "overall", &sel.overall);
    }
    out.emplace_back("grand/view_average", &r.report.grand.view_average);
    out.emplace_back("grand/rank_correlation", &r.report.grand.rank_correlation);
    out.emplace_back("grand/overall", &r.report.grand.overall);
    return out;
}

std::vector<std::string> winners(const StudyResult& r) {
    std::vector<std::string> out;
    for (const auto& s : r.report.per_mode) {
        out.push_back(s.selection.model_id);
    }
    out.push_back(r.report.grand.selection.model_id);
    return out;
}

WeightStore transform_model(const WeightStore& store, const std::string& model, double c) {
    std::vector<WeightRecord> recs(store.records().begin(), store.records().end());
    for (auto& r : recs) {
        if (r.model_id == model) {
            for (auto& w : r.weights) {
                w *= c;
            }
        }
    }
    return WeightStore::build(store.config(), std::move(recs));
}

WeightStore relabel_models(const WeightStore& store, const std::vector<std::size_t>& perm) {
    auto config = store.config();
    std::vector<std::string> ids;
    for (auto p : perm) {
        ids.push_back(store.config().model_ids[p]);
    }
    config.model_ids = ids;
    std::vector<WeightRecord> recs(store.records().begin(), store.records().end());
    return WeightStore::build(config, std::move(recs));
}

// --- criteria ----------------------------------------------------------------

Outcome oracle_equivalence() {
    const auto t0 = Clock::now();
    oracle_bench::Rng pick(20240601);
    const std::vector<Scenario> scenarios{Scenario::random_independent, Scenario::planted_consensus,
                                          Scenario::identical_models, Scenario::scaled_copies};
    const std::vector<std::size_t> pool{2, 3, 5};
    std::size_t studies = 0, mismatched = 0;
    std::string first;
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        SyntheticStudySpec s;
        s.seed = seed;
        s.scenario = scenarios[seed % scenarios.size()];
        s.n_models = 2 + pick.below(3);
        s.n_views = 2 + pick.below(2);
        s.n_r = 6 + pick.below(5);
        s.n_modes = 1 + pick.below(2);
        s.runs_per_cell = 1 + pick.below(3);
        s.thresholds.clear();
        while (s.thresholds.empty()) {
            for (auto k : pool) {
                if (pick.below(2) == 1) {
                    s.thresholds.push_back(k);
                }
            }
        }
        if (s.scenario == Scenario::planted_consensus) {
            s.n_models = 3;
            s.n_r = 10;
            s.thresholds = {2, 3};
            s.planted_model = seed % 3;
        }
        const auto store = oracle_bench::generate_study(s);
        const auto result = run_pipeline(store);
        const auto oracle = oracle_bench::oracle_pipeline(store);
        const auto diffs = oracle_bench::compare_with_oracle(result, oracle, 1e-12);
        ++studies;
        if (!diffs.empty()) {
            ++mismatched;
            if (first.empty()) {
                first = "seed " + std::to_string(seed) + ": " + diffs.front();
            }
        }
    }
    const double secs = seconds_since(t0);
    Outcome out;
    out.pass = studies >= 20 && mismatched == 0 && secs < 10.0;
    out.detail = std::to_string(studies) + " studies, " + std::to_string(mismatched) + " mismatched, tol 1e-12, " +
                 fmt("%.2f s", secs) + (first.empty() ? "" : "; " + first);
    return out;
}

Outcome invariant_suite() {
    const auto t0 = Clock::now();
    oracle_bench::Rng pick(77);
    const std::vector<Scenario> scenarios{Scenario::random_independent, Scenario::identical_models,
                                          Scenario::scaled_copies};
    std::size_t failed = 0, checks = 0;
    std::string first;
    auto expect = [&](bool ok, const std::string& what) {
        ++checks;
        if (!ok) {
            ++failed;
            if (first.empty()) {
                first = what;
            }
        }
    };
    const int instances = 1000;
    for (int n = 0; n < instances; ++n) {
        SyntheticStudySpec s;
        s.seed = 100000 + static_cast<std::uint64_t>(n);
        s.scenario = scenarios[pick.below(scenarios.size())];
        s.n_models = 2 + pick.below(4);
        s.n_views = 2 + pick.below(3);
        s.n_r = 6 + pick.below(30);
        s.n_modes = 1 + pick.below(2);
        s.runs_per_cell = 1 + pick.below(2);
        s.thresholds.clear();
        for (std::size_t k = 1; k <= s.n_r; ++k) {
            if (pick.below(s.n_r) < 3) {
                s.thresholds.push_back(k);
            }
        }
        if (s.thresholds.empty()) {
            s.thresholds = {1 + pick.below(s.n_r)};
        }
        const auto result = run_pipeline(oracle_bench::generate_study(s));
        const std::string tag = "instance " + std::to_string(n) + " ";

        for (const auto& [name, m] : all_matrices(result)) {
            const bool overlap = is_overlap_kind(m->kind()) || name.ends_with("/a.r.i") || name.ends_with("/a.w.i");
            const bool correlation = m->kind() == MatrixKind::correlation || name.ends_with("/s.c") ||
                                     name.ends_with("/a.w.c") || name.ends_with("/r.c");
            if (overlap || correlation || name.ends_with("/KL") || name.ends_with("/L2") ||
                m->kind() == MatrixKind::overall) {
                expect(m->is_symmetric(), tag + name + " not symmetric");
            }
            for (std::size_t i = 0; i < m->size(); ++i) {
                if (overlap) {
                    expect((*m)(i, i) == 1.0, tag + name + " diagonal not 1");
                }
                for (std::size_t j = 0; j < m->size(); ++j) {
                    const double x = (*m)(i, j);
                    if (overlap) {
                        expect(x >= 0.0 && x <= 1.0, tag + name + " outside [0,1]");
                    }
                    if (correlation) {
                        expect(x >= -1.0 && x <= 1.0, tag + name + " outside [-1,1]");
                    }
                }
            }
        }
        for (std::size_t o = 0; o < result.scores.per_mode.size(); ++o) {
            const auto& kl = result.scores.get(o, ScoreId::kl_divergence).pairwise;
            const auto& l2 = result.scores.get(o, ScoreId::l2_distance).pairwise;
            const std::size_t n_m = kl.size();
            for (std::size_t i = 0; i < n_m; ++i) {
                expect(kl(i, i) == 0.0, tag + "KL self-value not 0");
                for (std::size_t j = 0; j < n_m; ++j) {
                    expect(kl(i, j) >= 0.0, tag + "KL negative");
                }
            }
            for (int t = 0; t < 10; ++t) {
                const auto a = pick.below(n_m), b = pick.below(n_m), c = pick.below(n_m);
                expect(l2(a, c) <= l2(a, b) + l2(b, c) + 1e-12, tag + "L2 triangle inequality");
            }
        }
    }
    const double secs = seconds_since(t0);
    Outcome out;
    out.pass = failed == 0 && secs < 30.0;
    out.detail = std::to_string(instances) + " instances, " + std::to_string(checks) + " checks, " +
                 std::to_string(failed) + " failed, " + fmt("%.2f s", secs) + (first.empty() ? "" : "; " + first);
    return out;
}

Outcome scale_sign_invariance() {
    std::size_t studies = 0, broken = 0;
    std::string first;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        SyntheticStudySpec s;
        s.seed = 5000 + seed;
        s.scenario = seed % 2 == 0 ? Scenario::random_independent : Scenario::planted_consensus;
        s.n_models = 3 + (seed % 2 == 0 ? seed % 3 : 0);
        s.n_views = 3;
        s.n_r = s.scenario == Scenario::planted_consensus ? 60 : 35;
        s.n_modes = 2;
        s.runs_per_cell = 2;
        s.planted_model = seed % 3;
        const auto store = oracle_bench::generate_study(s);
        const auto base = run_pipeline(store);
        const auto base_matrices = all_matrices(base);
        const auto& target = store.config().model_ids[seed % store.config().n_models()];
        for (double c : {1e-6, 3.0, 1e6, -1.0}) {
            const auto changed = run_pipeline(transform_model(store, target, c));
            const auto changed_matrices = all_matrices(changed);
            bool same = winners(base) == winners(changed);
            for (std::size_t i = 0; i < base_matrices.size() && same; ++i) {
                same = *base_matrices[i].second == *changed_matrices[i].second;
                if (!same && first.empty()) {
                    first = "seed " + std::to_string(s.seed) + " c=" + fmt("%g", c) + " " + base_matrices[i].first;
                }
            }
            broken += same ? 0 : 1;
        }
        ++studies;
    }
    Outcome out;
    out.pass = studies == 50 && broken == 0;
    out.detail = std::to_string(studies) + " studies x c in {1e-6, 3, 1e6, -1}, exact comparison, " +
                 std::to_string(broken) + " changed" + (first.empty() ? "" : "; " + first);
    return out;
}

Outcome permutation_equivariance() {
    oracle_bench::Rng pick(31337);
    std::size_t studies = 0, broken = 0, tied = 0;
    std::string first;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        SyntheticStudySpec s;
        s.seed = 9000 + seed;
        s.scenario = seed % 2 == 0 ? Scenario::random_independent : Scenario::planted_consensus;
        s.n_models = s.scenario == Scenario::planted_consensus ? 3 : 4 + seed % 3;
        s.n_views = 3;
        s.n_r = s.scenario == Scenario::planted_consensus ? 60 : 35;
        s.n_modes = 2;
        s.runs_per_cell = 2;
        s.planted_model = seed % 3;
        const auto store = oracle_bench::generate_study(s);
        const auto base = run_pipeline(store);
        ++studies;
        bool any_tie = base.report.grand.selection.tie;
        for (const auto& m : base.report.per_mode) {
            any_tie = any_tie || m.selection.tie;
        }
        tied += any_tie ? 1 : 0;

        std::vector<std::size_t> perm(s.n_models);
        std::iota(perm.begin(), perm.end(), 0);
        pick.shuffle(std::span<std::size_t>(perm));
        const auto moved = run_pipeline(relabel_models(store, perm));

        bool ok = any_tie || winners(base) == winners(moved);
        const auto a = all_matrices(base);
        const auto b = all_matrices(moved);
        for (std::size_t i = 0; i < a.size() && ok; ++i) {
            const auto& x = *a[i].second;
            const auto& y = *b[i].second;
            // Model-axis matrices permute; view-axis matrices are untouched
            // except for being listed in the new model order.
            const bool model_axis = x.axis_ids() == store.config().model_ids;
            if (model_axis) {
                const auto expected = x.permuted(perm);
                ok = expected.axis_ids() == y.axis_ids();
                for (std::size_t r = 0; r < y.size() && ok; ++r) {
                    for (std::size_t c = 0; c < y.size() && ok; ++c) {
                        ok = std::fabs(expected(r, c) - y(r, c)) <= 1e-12;
                    }
                }
            }
            if (!ok && first.empty()) {
                first = "seed " + std::to_string(s.seed) + " " + a[i].first;
            }
        }
        // Per-model GNN matrices move with their model.
        for (std::size_t o = 0; o < base.modes.size() && ok; ++o) {
            for (std::size_t g = 0; g < perm.size() && ok; ++g) {
                ok = moved.modes[o].gnn_matrices[g] == base.modes[o].gnn_matrices[perm[g]];
            }
        }
        if (!ok && first.empty()) {
            first = "seed " + std::to_string(s.seed);
        }
        broken += ok ? 0 : 1;
    }
    Outcome out;
    out.pass = studies == 50 && broken == 0 && tied == 0;
    out.detail = std::to_string(studies) + " studies, " + std::to_string(broken) + " broken, " +
                 std::to_string(tied) + " with ties, tol 1e-12" + (first.empty() ? "" : "; " + first);
    return out;
}

Outcome chance_level() {
    const auto t0 = Clock::now();
    const int trials = 1000;
    double total = 0.0;
    for (int t = 0; t < trials; ++t) {
        SyntheticStudySpec s;
        s.seed = 70000 + static_cast<std::uint64_t>(t);
        s.scenario = Scenario::random_independent;
        s.n_r = 35;
        s.n_models = 5;
        s.n_views = 4;
        s.thresholds = {5, 10, 15, 20};
        const auto result = run_pipeline(oracle_bench::generate_study(s));
        const auto& va = result.scores.get(0, ScoreId::views_average).pairwise;
        double sum = 0.0;
        for (std::size_t i = 0; i < va.size(); ++i) {
            for (std::size_t j = 0; j < va.size(); ++j) {
                sum += i == j ? 0.0 : va(i, j);
            }
        }
        total += sum / static_cast<double>(va.size() * (va.size() - 1));
    }
    const double mean = total / trials;
    const double expected = (5.0 + 10 + 15 + 20) / (4.0 * 35.0);
    Outcome out;
    out.pass = std::fabs(mean - 0.357) <= 0.02;
    out.detail = std::to_string(trials) + " trials, mean off-diagonal v.a " + fmt("%.4f", mean) + " (expected " +
                 fmt("%.4f", expected) + ", target 0.357 +/- 0.02), " + fmt("%.2f s", seconds_since(t0));
    return out;
}

// Top-K overlap between two models, from the raw records of one cell/run.
double topk_overlap(const WeightStore& store, const std::string& a, const std::string& b, const std::string& view,
                    const std::string& mode, std::uint64_t run, std::size_t k) {
    const auto* ra = store.find(a, view, mode, run);
    const auto* rb = store.find(b, view, mode, run);
    return overlap_ratio(top_k(rank_biomarkers(ra->weights), k), top_k(rank_biomarkers(rb->weights), k));
}

Outcome planted_recovery() {
    std::size_t studies = 0, recovered = 0;
    double min_planted = 1.0, max_mutual = 0.0, layout_mutual = 0.0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        SyntheticStudySpec s;
        s.seed = seed;
        s.scenario = Scenario::planted_consensus;
        s.n_models = 3;
        s.n_views = 4;
        s.n_r = 60;
        s.n_modes = 2;
        s.runs_per_cell = 2;
        s.thresholds = {5, 10, 15, 20};
        s.planted_fraction = 0.6;
        s.planted_model = seed % 3;
        layout_mutual = std::max(layout_mutual, oracle_bench::planted_mutual_overlap(s));
        const auto store = oracle_bench::generate_study(s);
        const auto& cfg = store.config();
        const auto planted = cfg.model_ids[s.planted_model];
        const std::size_t K = s.thresholds.back();
        for (const auto& mode : cfg.mode_ids) {
            for (const auto& view : cfg.view_ids) {
                for (std::uint64_t run = 0; run < s.runs_per_cell; ++run) {
                    for (std::size_t i = 0; i < cfg.n_models(); ++i) {
                        for (std::size_t j = i + 1; j < cfg.n_models(); ++j) {
                            const double x = topk_overlap(store, cfg.model_ids[i], cfg.model_ids[j], view, mode, run, K);
                            if (i == s.planted_model || j == s.planted_model) {
                                min_planted = std::min(min_planted, x);
                            } else {
                                max_mutual = std::max(max_mutual, x);
                            }
                        }
                    }
                }
            }
        }
        const auto result = run_pipeline(store);
        bool ok = result.report.modes_agree && result.report.grand.selection.model_id == planted;
        for (const auto& m : result.report.per_mode) {
            ok = ok && m.selection.model_id == planted && !m.selection.tie;
        }
        recovered += ok ? 1 : 0;
        ++studies;
    }
    Outcome out;
    out.pass = recovered >= 99 && min_planted >= 0.6 && max_mutual <= 0.2 && layout_mutual <= 0.2;
    out.detail = std::to_string(recovered) + "/" + std::to_string(studies) +
                 " planted model selected in both modes and overall; measured top-20 overlap planted>=" +
                 fmt("%.2f", min_planted) + ", mutual<=" + fmt("%.2f", max_mutual);
    return out;
}

// Reference formulas for the hand-checked values, written out directly.
double ref_spearman(const std::vector<double>& a, const std::vector<double>& b) {
    const double n = static_cast<double>(a.size());
    double d2 = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        d2 += (a[i] - b[i]) * (a[i] - b[i]);
    }
    return 1.0 - 6.0 * d2 / (n * (n * n - 1.0));
}

double ref_l2(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += (a[i] - b[i]) * (a[i] - b[i]);
    }
    return std::sqrt(s);
}

// (KL(p||q) + KL(q||p)) / 2 = sum (p - q) ln(p / q) / 2.
double ref_symmetric_kl(const std::vector<double>& p, const std::vector<double>& q) {
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        s += (p[i] - q[i]) * std::log(p[i] / q[i]);
    }
    return s / 2.0;
}

double ref_kl(const std::vector<double>& p, const std::vector<double>& q) {
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        s += p[i] * std::log(p[i] / q[i]);
    }
    return s;
}

Outcome hand_values() {
    const std::vector<std::size_t> ra{1, 2, 3, 4}, rb{1, 2, 4, 3};
    const double rc = spearman_of_ranks(ra, rb);
    const double rc_ref = ref_spearman({1, 2, 3, 4}, {1, 2, 4, 3});

    const std::vector<double> z{0, 0}, t{3, 4};
    const double l2 = euclidean_distance(z, t);
    const double l2_ref = ref_l2(z, t);

    const std::vector<double> p{0.5, 0.5}, q{0.9, 0.1};
    const double skl = symmetric_kl(p, q);
    const double skl_ref = ref_symmetric_kl(p, q);
    const double kl_qp = kl_divergence(q, p);
    const double kl_qp_ref = ref_kl(q, p);

    const bool ok = std::fabs(rc - rc_ref) <= 1e-9 && std::fabs(rc - 0.8) <= 1e-9 && std::fabs(l2 - l2_ref) <= 1e-9 &&
                    std::fabs(l2 - 5.0) <= 1e-9 && std::fabs(skl - skl_ref) <= 1e-9 &&
                    std::fabs(kl_qp - kl_qp_ref) <= 1e-9 && std::fabs(kl_qp - 0.3680) <= 1e-4;
    Outcome out;
    out.pass = ok;
    out.detail = "r.c " + fmt("%.12f", rc) + " (ref " + fmt("%.12f", rc_ref) + "), L2 " + fmt("%.12f", l2) + " (ref " +
                 fmt("%.12f", l2_ref) + "), KL symmetrized " + fmt("%.12f", skl) + " (ref " + fmt("%.12f", skl_ref) +
                 "), KL(q||p) " + fmt("%.12f", kl_qp) + " (ref " + fmt("%.12f", kl_qp_ref) + ", ~0.3680)";
    return out;
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
    std::map<std::string, std::string> out;
    for (const auto& e : fs::recursive_directory_iterator(dir)) {
        if (!e.is_regular_file()) {
            continue;
        }
        std::ifstream in(e.path(), std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        std::string bytes = ss.str();
        if (e.path().filename() == "manifest.json") {
            auto j = nlohmann::json::parse(bytes);
            j.erase("created_at");
            bytes = j.dump(2);
        }
        out[fs::relative(e.path(), dir).generic_string()] = bytes;
    }
    return out;
}

Outcome determinism() {
    const auto root = fs::temp_directory_path() / "reprosel_acceptance_determinism";
    fs::remove_all(root);
    std::ostringstream err;
    cli::GenOptions gen;
    gen.spec.seed = 11;
    gen.spec.scenario = Scenario::planted_consensus;
    gen.spec.n_models = 3;
    gen.spec.n_r = 60;
    gen.spec.n_modes = 2;
    gen.spec.runs_per_cell = 3;
    gen.out_dir = root / "study";
    if (cli::cmd_gen(gen, err) != 0) {
        return {false, "gen failed: " + err.str()};
    }
    cli::RunOptions run;
    run.study.config = root / "study/config.json";
    run.study.inputs = {root / "study/study.jsonl"};
    run.out_dir = root / "out";
    if (cli::cmd_run(run, err) != 0) {
        return {false, "first run failed: " + err.str()};
    }
    const auto first = snapshot(run.out_dir);
    if (cli::cmd_run(run, err) != 0) {
        return {false, "second run failed: " + err.str()};
    }
    const auto second = snapshot(run.out_dir);
    std::size_t differing = 0;
    for (const auto& [path, bytes] : first) {
        const auto it = second.find(path);
        differing += (it == second.end() || it->second != bytes) ? 1 : 0;
    }
    differing += second.size() != first.size() ? 1 : 0;
    fs::remove_all(root);
    return {differing == 0 && first.size() > 5, std::to_string(first.size()) + " output files compared byte for byte, " +
                                                    std::to_string(differing) + " differ (manifest created_at excluded)"};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"oracle equivalence", oracle_equivalence},
        {"invariant suite", invariant_suite},
        {"scale/sign invariance", scale_sign_invariance},
        {"permutation equivariance", permutation_equivariance},
        {"chance-level statistic", chance_level},
        {"planted-consensus recovery", planted_recovery},
        {"hand-checked score values", hand_values},
        {"determinism", determinism},
    };
    int failures = 0;
    for (const auto& [name, check] : criteria) {
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("%s  %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
        std::fflush(stdout);
        failures += o.pass ? 0 : 1;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
