#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "reprosel/study_config.hpp"
#include "reprosel/weight_store.hpp"

namespace oracle_bench {

enum class Scenario {
    random_independent,  // i.i.d. uniform(-1, 1) weights everywhere
    planted_consensus,   // one model shares its top-k with every other model
    identical_models,    // every model carries the same weights on a cell
    scaled_copies,       // model 0's weights, others are positive multiples of it
};

std::string_view to_string(Scenario s);
std::optional<Scenario> scenario_from_string(std::string_view s);

struct SyntheticStudySpec {
    std::uint64_t seed{0};
    std::size_t n_r{35};
    std::size_t n_models{5};
    std::size_t n_views{4};
    std::size_t n_modes{1};
    std::size_t runs_per_cell{1};
    std::vector<std::size_t> thresholds{5, 10, 15, 20};
    Scenario scenario{Scenario::random_independent};
    // planted_consensus only: fraction of the planted model's top-K set
    // (K = largest threshold) shared with each other model.
    double planted_fraction{0.6};
    std::size_t planted_model{0};
};

/// Config with ids m0.., v0.., mode0.. matching the spec's dimensions.
reprosel::StudyConfig synthetic_config(const SyntheticStudySpec& spec);

/// Deterministic in (spec, seed). Throws reprosel::StudyError on an
/// infeasible spec (e.g. not enough biomarkers for the planted layout).
///
/// planted_consensus layout, per (mode, run): a random permutation ranks the
/// planted model's biomarkers; its top-K block is split into cyclic windows of
/// ceil(f*K) slots, one per other model, with evenly spaced starts, so windows
/// of different models overlap as little as the cycle allows. Each other model
/// ranks its window's biomarkers (in planted order) interleaved with private
/// biomarkers drawn from outside the planted top-K. The top-K blocks are the
/// same on every view; views differ only below rank K.
reprosel::WeightStore generate_study(const SyntheticStudySpec& spec);

/// Largest top-K overlap fraction between two non-planted models implied by
/// the planted layout.
double planted_mutual_overlap(const SyntheticStudySpec& spec);

}  // namespace oracle_bench
