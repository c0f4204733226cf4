#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "oracle_bench/synthetic.hpp"
#include "reprosel/scores.hpp"

namespace reprosel::cli {

inline constexpr const char* kToolName = "reprosel";
inline constexpr const char* kToolVersion = "0.1.0";

struct StudyInputs {
    std::filesystem::path config;
    std::vector<std::filesystem::path> inputs;
    bool allow_missing{false};
    std::optional<std::vector<std::size_t>> thresholds;  // overrides the config's list
};

struct RunOptions {
    StudyInputs study;
    std::filesystem::path out_dir;
    bool normalize_overall{false};
    bool signed_ranking{false};
    std::vector<ScoreId> scores{kAllScores.begin(), kAllScores.end()};
};

struct SelectOptions {
    // One overall matrix, or a view-average and a rank-correlation matrix to sum.
    std::vector<std::filesystem::path> matrices;
    std::filesystem::path out_dir;
    bool normalize_overall{false};
};

struct GenOptions {
    oracle_bench::SyntheticStudySpec spec;
    std::filesystem::path out_dir;
};

// Each command returns the process exit code and writes diagnostics to `err`.
int cmd_validate(const StudyInputs& options, std::ostream& err);
int cmd_run(const RunOptions& options, std::ostream& err);
int cmd_scores(const RunOptions& options, std::ostream& err);
int cmd_select(const SelectOptions& options, std::ostream& err);
int cmd_gen(const GenOptions& options, std::ostream& err);

/// Lowercase hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

/// Replaces every character outside [A-Za-z0-9._-] with '_'.
std::string safe_file_component(const std::string& id);

/// Parses "5,10,15" style lists; throws std::invalid_argument on bad input.
std::vector<std::size_t> parse_size_list(const std::string& text);
std::vector<ScoreId> parse_score_list(const std::string& text);

}  // namespace reprosel::cli
