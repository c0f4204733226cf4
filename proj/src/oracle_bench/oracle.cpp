#include "oracle_bench/oracle.hpp"

#include <cmath>
#include <cstdint>
#include <tuple>

namespace oracle_bench {

namespace {

// Same numeric conventions as the main pipeline, restated rather than shared.
constexpr double kTie = 1e-9;
constexpr double kEps = 1e-12;
constexpr double kFlat = 1e-12;
constexpr double kRankTie = 1e-9;

using Key = std::tuple<std::string, std::string, std::string, std::uint64_t>;

// Membership mask of the k largest |w|, picking the lowest index on ties.
std::vector<bool> top_mask(const std::vector<double>& w, std::size_t k) {
    std::vector<bool> chosen(w.size(), false);
    for (std::size_t pick = 0; pick < k; ++pick) {
        std::size_t best = w.size();
        for (std::size_t i = 0; i < w.size(); ++i) {
            if (chosen[i]) {
                continue;
            }
            if (best == w.size() || std::fabs(w[i]) > std::fabs(w[best])) {
                best = i;
            }
        }
        chosen[best] = true;
    }
    return chosen;
}

double mask_overlap(const std::vector<bool>& a, const std::vector<bool>& b, std::size_t k) {
    std::size_t n = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] && b[i]) {
            ++n;
        }
    }
    return static_cast<double>(n) / static_cast<double>(k);
}

Grid square(std::size_t n, double fill = 0.0) { return Grid(n, std::vector<double>(n, fill)); }

bool flat(const std::vector<double>& x) {
    double lo = x[0];
    double hi = x[0];
    for (double v : x) {
        lo = v < lo ? v : lo;
        hi = v > hi ? v : hi;
    }
    return hi - lo <= kFlat * std::max(1.0, std::fabs(hi));
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() < 2 || flat(x) || flat(y)) {
        return 0.0;
    }
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i] / static_cast<double>(x.size());
        my += y[i] / static_cast<double>(y.size());
    }
    double num = 0.0;
    double dx = 0.0;
    double dy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        num += (x[i] - mx) * (y[i] - my);
        dx += (x[i] - mx) * (x[i] - mx);
        dy += (y[i] - my) * (y[i] - my);
    }
    return num / (std::sqrt(dx) * std::sqrt(dy));
}

// 1-based descending ranks: one plus the number of entries that beat v,
// where near-equal strengths are decided by index.
std::vector<double> view_ranks(const std::vector<double>& s) {
    std::vector<double> r(s.size());
    for (std::size_t a = 0; a < s.size(); ++a) {
        std::size_t ahead = 0;
        for (std::size_t b = 0; b < s.size(); ++b) {
            const bool near = std::fabs(s[b] - s[a]) <= kRankTie;
            if ((!near && s[b] > s[a]) || (near && b < a)) {
                ++ahead;
            }
        }
        r[a] = static_cast<double>(ahead + 1);
    }
    return r;
}

// Tie-free Spearman via the squared rank difference formula.
double spearman(const std::vector<double>& ra, const std::vector<double>& rb) {
    const double n = static_cast<double>(ra.size());
    double d2 = 0.0;
    for (std::size_t i = 0; i < ra.size(); ++i) {
        d2 += (ra[i] - rb[i]) * (ra[i] - rb[i]);
    }
    return 1.0 - 6.0 * d2 / (n * (n * n - 1.0));
}

double row_mean_off_diagonal(const Grid& g, std::size_t i) {
    double s = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
        if (j != i) {
            s += g[i][j];
        }
    }
    return s / static_cast<double>(g.size() - 1);
}

// Strengths of one model's GNN-specific matrices: [threshold][view].
struct Profile {
    std::vector<std::vector<double>> by_threshold;
    std::vector<double> mean;
    std::vector<double> accumulated;
    std::vector<double> ranks;
};

Profile profile_from(const std::vector<Grid>& per_threshold) {
    Profile p;
    const std::size_t n_v = per_threshold[0].size();
    p.mean.assign(n_v, 0.0);
    for (const auto& g : per_threshold) {
        std::vector<double> s(n_v, 0.0);
        for (std::size_t a = 0; a < n_v; ++a) {
            for (std::size_t b = 0; b < n_v; ++b) {
                if (a != b) {
                    s[a] += g[a][b];
                }
            }
            p.accumulated.push_back(s[a]);
        }
        p.by_threshold.push_back(s);
    }
    for (std::size_t a = 0; a < n_v; ++a) {
        double total = 0.0;
        for (const auto& s : p.by_threshold) {
            total += s[a];
        }
        p.mean[a] = total / static_cast<double>(per_threshold.size());
    }
    p.ranks = view_ranks(p.mean);
    return p;
}

Grid rank_correlation_grid(const std::vector<Profile>& profiles) {
    Grid g = square(profiles.size(), 1.0);
    for (std::size_t i = 0; i < profiles.size(); ++i) {
        for (std::size_t j = 0; j < profiles.size(); ++j) {
            if (i != j) {
                g[i][j] = spearman(profiles[i].ranks, profiles[j].ranks);
            }
        }
    }
    return g;
}

void select(OracleModeReport& r) {
    const std::size_t n = r.overall.size();
    r.strengths.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j) {
                r.strengths[i] += r.overall[i][j];
            }
        }
    }
    double best = r.strengths[0];
    for (double s : r.strengths) {
        best = s > best ? s : best;
    }
    std::size_t count = 0;
    r.winner = n;
    for (std::size_t i = 0; i < n; ++i) {
        if (r.strengths[i] >= best - kTie) {
            ++count;
            if (r.winner == n) {
                r.winner = i;
            }
        }
    }
    r.tie = count > 1;
}

void finish_overall(OracleModeReport& r) {
    const std::size_t n = r.view_average.size();
    r.overall = square(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            r.overall[i][j] = r.view_average[i][j] + r.rank_correlation[i][j];
        }
    }
    select(r);
}

template <typename F>
void add_score(OracleModeReport& r, const std::string& label, std::size_t n, double self, F&& pair) {
    Grid g = square(n, self);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j) {
                g[i][j] = pair(i, j);
            }
        }
    }
    std::vector<double> per_model(n);
    for (std::size_t i = 0; i < n; ++i) {
        per_model[i] = row_mean_off_diagonal(g, i);
    }
    r.score_pairwise[label] = std::move(g);
    r.score_per_model[label] = std::move(per_model);
}

}  // namespace

double oracle_overlap(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b, std::size_t k) {
    std::size_t shared = 0;
    for (auto x : a) {
        for (auto y : b) {
            if (x == y) {
                ++shared;
            }
        }
    }
    return static_cast<double>(shared) / static_cast<double>(k);
}

OracleReport oracle_pipeline(const reprosel::WeightStore& store) {
    const auto& cfg = store.config();
    const std::size_t n_m = cfg.model_ids.size();
    const std::size_t n_v = cfg.view_ids.size();
    const std::size_t n_k = cfg.thresholds.size();

    std::map<Key, std::vector<double>> weights;
    for (const auto& r : store.records()) {
        weights[{r.model_id, r.view_id, r.mode_id, r.run_id}] = r.weights;
    }

    OracleReport out;
    // [mode][model][threshold] run-mean GNN-specific grids, reused for the grand report.
    std::vector<std::vector<std::vector<Grid>>> gnn_by_mode;

    for (const auto& mode : cfg.mode_ids) {
        std::vector<std::uint64_t> runs;
        for (const auto& [key, w] : weights) {
            if (std::get<0>(key) == cfg.model_ids[0] && std::get<1>(key) == cfg.view_ids[0] &&
                std::get<2>(key) == mode) {
                runs.push_back(std::get<3>(key));
            }
        }
        const double n_runs = static_cast<double>(runs.size());

        // masks[model][view][run][threshold]
        std::vector<std::vector<std::vector<std::vector<std::vector<bool>>>>> masks(
            n_m, std::vector<std::vector<std::vector<std::vector<bool>>>>(n_v));
        for (std::size_t m = 0; m < n_m; ++m) {
            for (std::size_t v = 0; v < n_v; ++v) {
                for (auto run : runs) {
                    const auto& w = weights.at({cfg.model_ids[m], cfg.view_ids[v], mode, run});
                    std::vector<std::vector<bool>> per_k;
                    for (auto k : cfg.thresholds) {
                        per_k.push_back(top_mask(w, k));
                    }
                    masks[m][v].push_back(std::move(per_k));
                }
            }
        }

        OracleModeReport rep;
        rep.mode_id = mode;
        rep.view_average = square(n_m);
        for (std::size_t i = 0; i < n_m; ++i) {
            for (std::size_t j = 0; j < n_m; ++j) {
                double total = 0.0;
                for (std::size_t v = 0; v < n_v; ++v) {
                    for (std::size_t r = 0; r < runs.size(); ++r) {
                        for (std::size_t h = 0; h < n_k; ++h) {
                            total += mask_overlap(masks[i][v][r][h], masks[j][v][r][h], cfg.thresholds[h]);
                        }
                    }
                }
                rep.view_average[i][j] = total / (static_cast<double>(n_v) * n_runs * static_cast<double>(n_k));
            }
        }

        std::vector<std::vector<Grid>> gnn(n_m);
        std::vector<Profile> profiles;
        for (std::size_t m = 0; m < n_m; ++m) {
            for (std::size_t h = 0; h < n_k; ++h) {
                Grid g = square(n_v);
                for (std::size_t a = 0; a < n_v; ++a) {
                    for (std::size_t b = 0; b < n_v; ++b) {
                        double total = 0.0;
                        for (std::size_t r = 0; r < runs.size(); ++r) {
                            total += mask_overlap(masks[m][a][r][h], masks[m][b][r][h], cfg.thresholds[h]);
                        }
                        g[a][b] = total / n_runs;
                    }
                }
                gnn[m].push_back(std::move(g));
            }
            profiles.push_back(profile_from(gnn[m]));
        }
        rep.rank_correlation = rank_correlation_grid(profiles);
        finish_overall(rep);

        add_score(rep, "v.a", n_m, 1.0, [&](std::size_t i, std::size_t j) { return rep.view_average[i][j]; });
        add_score(rep, "r.c", n_m, 1.0,
                  [&](std::size_t i, std::size_t j) { return rep.rank_correlation[i][j]; });
        add_score(rep, "s.c", n_m, 1.0,
                  [&](std::size_t i, std::size_t j) { return pearson(profiles[i].mean, profiles[j].mean); });
        add_score(rep, "a.w.c", n_m, 1.0, [&](std::size_t i, std::size_t j) {
            return pearson(profiles[i].accumulated, profiles[j].accumulated);
        });
        add_score(rep, "a.w.i", n_m, 1.0, [&](std::size_t i, std::size_t j) {
            auto scaled = [](const std::vector<double>& x) {
                std::vector<double> y(x.size(), 0.0);
                if (flat(x)) {
                    return y;
                }
                double lo = x[0];
                double hi = x[0];
                for (double v : x) {
                    lo = v < lo ? v : lo;
                    hi = v > hi ? v : hi;
                }
                for (std::size_t t = 0; t < x.size(); ++t) {
                    y[t] = (x[t] - lo) / (hi - lo);
                }
                return y;
            };
            const auto si = scaled(profiles[i].accumulated);
            const auto sj = scaled(profiles[j].accumulated);
            double total = 0.0;
            for (std::size_t h = 0; h < n_k; ++h) {
                for (std::size_t v = 0; v < n_v; ++v) {
                    const double close = 1.0 - std::fabs(si[h * n_v + v] - sj[h * n_v + v]);
                    const double same_rank =
                        1.0 - std::fabs(profiles[i].ranks[v] - profiles[j].ranks[v]) / static_cast<double>(n_v - 1);
                    total += close * same_rank;
                }
            }
            return total / static_cast<double>(n_v * n_k);
        });
        add_score(rep, "a.r.i", n_m, 1.0, [&](std::size_t i, std::size_t j) {
            double total = 0.0;
            for (std::size_t r = 0; r < runs.size(); ++r) {
                std::size_t both = 0;
                std::size_t either = 0;
                for (std::size_t x = 0; x < cfg.n_r; ++x) {
                    bool in_i = false;
                    bool in_j = false;
                    for (std::size_t v = 0; v < n_v; ++v) {
                        for (std::size_t h = 0; h < n_k; ++h) {
                            in_i = in_i || masks[i][v][r][h][x];
                            in_j = in_j || masks[j][v][r][h][x];
                        }
                    }
                    both += (in_i && in_j) ? 1 : 0;
                    either += (in_i || in_j) ? 1 : 0;
                }
                total += static_cast<double>(both) / static_cast<double>(either);
            }
            return total / n_runs;
        });
        add_score(rep, "KL", n_m, 0.0, [&](std::size_t i, std::size_t j) {
            auto dist = [](const std::vector<double>& s) {
                double z = 0.0;
                for (double x : s) {
                    z += x + kEps;
                }
                std::vector<double> p;
                for (double x : s) {
                    p.push_back((x + kEps) / z);
                }
                return p;
            };
            const auto p = dist(profiles[i].mean);
            const auto q = dist(profiles[j].mean);
            double d = 0.0;
            for (std::size_t v = 0; v < p.size(); ++v) {
                d += (p[v] - q[v]) * std::log(p[v] / q[v]);
            }
            return 0.5 * d;
        });
        add_score(rep, "L2", n_m, 0.0, [&](std::size_t i, std::size_t j) {
            double ss = 0.0;
            for (std::size_t t = 0; t < profiles[i].accumulated.size(); ++t) {
                ss += std::pow(profiles[i].accumulated[t] - profiles[j].accumulated[t], 2);
            }
            return std::sqrt(ss);
        });

        out.modes.push_back(std::move(rep));
        gnn_by_mode.push_back(std::move(gnn));
    }

    const double n_modes = static_cast<double>(cfg.mode_ids.size());
    auto& grand = out.grand;
    grand.mode_id = "grand";
    grand.view_average = square(n_m);
    for (const auto& rep : out.modes) {
        for (std::size_t i = 0; i < n_m; ++i) {
            for (std::size_t j = 0; j < n_m; ++j) {
                grand.view_average[i][j] += rep.view_average[i][j] / n_modes;
            }
        }
    }
    std::vector<Profile> grand_profiles;
    for (std::size_t m = 0; m < n_m; ++m) {
        std::vector<Grid> per_threshold;
        for (std::size_t h = 0; h < n_k; ++h) {
            Grid g = square(n_v);
            for (const auto& mode : gnn_by_mode) {
                for (std::size_t a = 0; a < n_v; ++a) {
                    for (std::size_t b = 0; b < n_v; ++b) {
                        g[a][b] += mode[m][h][a][b] / n_modes;
                    }
                }
            }
            per_threshold.push_back(std::move(g));
        }
        grand_profiles.push_back(profile_from(per_threshold));
    }
    grand.rank_correlation = rank_correlation_grid(grand_profiles);
    finish_overall(grand);

    const auto& winner = cfg.model_ids[grand.winner];
    out.winner_weights.assign(cfg.n_r, 0.0);
    double count = 0.0;
    for (const auto& r : store.records()) {
        if (r.model_id != winner) {
            continue;
        }
        for (std::size_t i = 0; i < cfg.n_r; ++i) {
            out.winner_weights[i] += std::fabs(r.weights[i]);
        }
        count += 1.0;
    }
    for (auto& x : out.winner_weights) {
        x /= count;
    }
    return out;
}

}  // namespace oracle_bench
