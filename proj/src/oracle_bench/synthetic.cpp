#include "oracle_bench/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>

#include "oracle_bench/rng.hpp"

namespace oracle_bench {

using reprosel::StudyError;

std::string_view to_string(Scenario s) {
    switch (s) {
    case Scenario::random_independent:
        return "random_independent";
    case Scenario::planted_consensus:
        return "planted_consensus";
    case Scenario::identical_models:
        return "identical_models";
    case Scenario::scaled_copies:
        return "scaled_copies";
    }
    return "?";
}

std::optional<Scenario> scenario_from_string(std::string_view s) {
    for (auto sc : {Scenario::random_independent, Scenario::planted_consensus, Scenario::identical_models,
                    Scenario::scaled_copies}) {
        if (to_string(sc) == s) {
            return sc;
        }
    }
    return std::nullopt;
}

reprosel::StudyConfig synthetic_config(const SyntheticStudySpec& spec) {
    reprosel::StudyConfig config;
    config.n_r = spec.n_r;
    for (std::size_t m = 0; m < spec.n_models; ++m) {
        config.model_ids.push_back("m" + std::to_string(m));
    }
    for (std::size_t v = 0; v < spec.n_views; ++v) {
        config.view_ids.push_back("v" + std::to_string(v));
    }
    for (std::size_t o = 0; o < spec.n_modes; ++o) {
        config.mode_ids.push_back("mode" + std::to_string(o));
    }
    config.thresholds = spec.thresholds;
    config.validate();
    return config;
}

namespace {

struct PlantedLayout {
    std::size_t top;      // K
    std::size_t shared;   // ceil(f * K)
    std::vector<std::size_t> starts;  // one per non-planted model
};

PlantedLayout planted_layout(const SyntheticStudySpec& spec) {
    if (spec.n_models < 2) {
        throw StudyError("planted_consensus needs at least two models");
    }
    if (spec.planted_model >= spec.n_models) {
        throw StudyError("planted model index out of range");
    }
    if (!(spec.planted_fraction > 0.0 && spec.planted_fraction <= 1.0)) {
        throw StudyError("planted fraction must lie in (0, 1]");
    }
    PlantedLayout layout;
    layout.top = *std::max_element(spec.thresholds.begin(), spec.thresholds.end());
    layout.shared = static_cast<std::size_t>(std::ceil(spec.planted_fraction * static_cast<double>(layout.top) - 1e-9));
    layout.shared = std::clamp<std::size_t>(layout.shared, 1, layout.top);
    const std::size_t others = spec.n_models - 1;
    for (std::size_t i = 0; i < others; ++i) {
        layout.starts.push_back(i * layout.top / others);
    }
    const std::size_t needed = others * (layout.top - layout.shared);
    if (needed > spec.n_r - layout.top) {
        throw StudyError("planted_consensus: need " + std::to_string(needed) +
                         " private biomarkers outside the planted top-" + std::to_string(layout.top) + ", only " +
                         std::to_string(spec.n_r - layout.top) + " available");
    }
    return layout;
}

std::set<std::size_t> window(const PlantedLayout& layout, std::size_t start) {
    std::set<std::size_t> slots;
    for (std::size_t t = 0; t < layout.shared; ++t) {
        slots.insert((start + t) % layout.top);
    }
    return slots;
}

std::vector<double> uniform_vector(Rng& rng, std::size_t n) {
    std::vector<double> w(n);
    for (auto& x : w) {
        x = rng.uniform(-1.0, 1.0);
    }
    return w;
}

// Weights whose ranking starts with `ranked` (strictly decreasing magnitudes
// in (1, 2)); every other biomarker gets a magnitude in [0, 1). Signs random.
std::vector<double> weights_from_ranking(Rng& rng, const std::vector<std::size_t>& ranked, std::size_t n_r) {
    std::vector<double> w(n_r, 0.0);
    std::vector<bool> placed(n_r, false);
    const double k = static_cast<double>(ranked.size());
    for (std::size_t t = 0; t < ranked.size(); ++t) {
        const double sign = (rng.next() & 1U) ? -1.0 : 1.0;
        w[ranked[t]] = sign * (2.0 - (static_cast<double>(t) + 0.5) / k);
        placed[ranked[t]] = true;
    }
    for (std::size_t i = 0; i < n_r; ++i) {
        if (!placed[i]) {
            w[i] = rng.uniform(-1.0, 1.0);
        }
    }
    return w;
}

// [model][view] weights for one (mode, run) of a planted study.
std::vector<std::vector<std::vector<double>>> planted_cell(Rng& rng, const SyntheticStudySpec& spec,
                                                           const PlantedLayout& layout) {
    std::vector<std::size_t> perm(spec.n_r);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    rng.shuffle(std::span<std::size_t>(perm));
    std::vector<std::size_t> slot_rank(layout.top);
    std::iota(slot_rank.begin(), slot_rank.end(), std::size_t{0});
    rng.shuffle(std::span<std::size_t>(slot_rank));

    std::vector<std::vector<std::size_t>> lists(spec.n_models);
    lists[spec.planted_model].assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(layout.top));
    const std::size_t n_private = layout.top - layout.shared;
    std::size_t other = 0;
    for (std::size_t m = 0; m < spec.n_models; ++m) {
        if (m == spec.planted_model) {
            continue;
        }
        std::vector<std::size_t> ranks;
        for (auto slot : window(layout, layout.starts[other])) {
            ranks.push_back(slot_rank[slot]);
        }
        std::sort(ranks.begin(), ranks.end());
        const std::size_t private_base = layout.top + other * n_private;
        std::size_t next_shared = 0;
        std::size_t next_private = 0;
        for (std::size_t t = 0; t < layout.top; ++t) {
            const bool shared_slot = ((t + 1) * layout.shared) / layout.top > (t * layout.shared) / layout.top;
            if (shared_slot) {
                lists[m].push_back(perm[ranks[next_shared++]]);
            } else {
                lists[m].push_back(perm[private_base + next_private++]);
            }
        }
        ++other;
    }

    std::vector<std::vector<std::vector<double>>> out(spec.n_models, std::vector<std::vector<double>>(spec.n_views));
    for (std::size_t v = 0; v < spec.n_views; ++v) {
        for (std::size_t m = 0; m < spec.n_models; ++m) {
            out[m][v] = weights_from_ranking(rng, lists[m], spec.n_r);
        }
    }
    return out;
}

}  // namespace

double planted_mutual_overlap(const SyntheticStudySpec& spec) {
    const auto layout = planted_layout(spec);
    std::size_t worst = 0;
    for (std::size_t a = 0; a < layout.starts.size(); ++a) {
        const auto wa = window(layout, layout.starts[a]);
        for (std::size_t b = a + 1; b < layout.starts.size(); ++b) {
            const auto wb = window(layout, layout.starts[b]);
            std::size_t shared = 0;
            for (auto s : wa) {
                shared += wb.count(s);
            }
            worst = std::max(worst, shared);
        }
    }
    return static_cast<double>(worst) / static_cast<double>(layout.top);
}

reprosel::WeightStore generate_study(const SyntheticStudySpec& spec) {
    auto config = synthetic_config(spec);
    if (spec.runs_per_cell == 0) {
        throw StudyError("runs_per_cell must be positive");
    }
    std::optional<PlantedLayout> layout;
    if (spec.scenario == Scenario::planted_consensus) {
        layout = planted_layout(spec);
    }

    Rng rng(spec.seed);
    // Scale factors come from their own stream so identical_models and
    // scaled_copies share every base draw.
    Rng scale_rng(spec.seed ^ 0x9E3779B97F4A7C15ULL);
    std::vector<double> scale(spec.n_models, 1.0);
    for (std::size_t m = 1; m < spec.n_models; ++m) {
        scale[m] = std::ldexp(1.0, static_cast<int>(scale_rng.below(41)) - 20);
    }

    std::vector<reprosel::WeightRecord> records;
    for (std::size_t o = 0; o < spec.n_modes; ++o) {
        for (std::size_t run = 0; run < spec.runs_per_cell; ++run) {
            std::vector<std::vector<std::vector<double>>> cell(spec.n_models,
                                                               std::vector<std::vector<double>>(spec.n_views));
            switch (spec.scenario) {
            case Scenario::random_independent:
                for (std::size_t m = 0; m < spec.n_models; ++m) {
                    for (std::size_t v = 0; v < spec.n_views; ++v) {
                        cell[m][v] = uniform_vector(rng, spec.n_r);
                    }
                }
                break;
            case Scenario::identical_models:
            case Scenario::scaled_copies:
                for (std::size_t v = 0; v < spec.n_views; ++v) {
                    const auto base = uniform_vector(rng, spec.n_r);
                    for (std::size_t m = 0; m < spec.n_models; ++m) {
                        cell[m][v] = base;
                        if (spec.scenario == Scenario::scaled_copies) {
                            for (auto& x : cell[m][v]) {
                                x *= scale[m];
                            }
                        }
                    }
                }
                break;
            case Scenario::planted_consensus:
                cell = planted_cell(rng, spec, *layout);
                break;
            }
            for (std::size_t m = 0; m < spec.n_models; ++m) {
                for (std::size_t v = 0; v < spec.n_views; ++v) {
                    records.push_back({config.model_ids[m], config.view_ids[v], config.mode_ids[o], run,
                                       std::move(cell[m][v])});
                }
            }
        }
    }
    return reprosel::WeightStore::build(std::move(config), std::move(records));
}

}  // namespace oracle_bench
