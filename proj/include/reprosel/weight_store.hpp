#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "reprosel/study_config.hpp"

namespace reprosel {

/// One learned weight vector, tagged by the study axes it was trained under.
struct WeightRecord {
    std::string model_id;
    std::string view_id;
    std::string mode_id;
    std::uint64_t run_id{};
    std::vector<double> weights;

    bool operator==(const WeightRecord&) const = default;
};

struct Diagnostic {
    enum class Severity { warning, error };

    Severity severity{Severity::error};
    std::string source;  // file name, empty for in-memory input
    std::size_t line{};  // 1-based, 0 when not tied to a line
    std::string message;

    std::string to_string() const;
};

/// Thrown by the loaders. Carries every problem found, not just the first.
class StoreError : public std::runtime_error {
public:
    explicit StoreError(std::vector<Diagnostic> diagnostics);

    const std::vector<Diagnostic>& diagnostics() const noexcept { return diagnostics_; }

private:
    std::vector<Diagnostic> diagnostics_;
};

struct LoadOptions {
    // Downgrade a missing (model, view, mode) cell from an error to a warning.
    bool allow_missing{false};
};

/// Immutable, validated collection of weight records.
///
/// Records are kept sorted by (model, view, mode) in config order and then by
/// run id, so each cell is a contiguous range.
class WeightStore {
public:
    /// Validates and indexes `records`; throws StoreError listing every violation.
    static WeightStore build(StudyConfig config, std::vector<WeightRecord> records,
                             LoadOptions options = {});

    const StudyConfig& config() const noexcept { return config_; }
    std::span<const WeightRecord> records() const noexcept { return records_; }
    bool allows_missing() const noexcept { return allow_missing_; }

    /// All runs of one cell in ascending run order. Throws StudyError on an
    /// unknown id, or on an empty cell (only reachable with allow_missing).
    std::span<const WeightRecord> records_for(std::string_view model, std::string_view view,
                                              std::string_view mode) const;
    std::span<const WeightRecord> records_for(std::size_t model, std::size_t view,
                                              std::size_t mode) const;

    const WeightRecord* find(std::string_view model, std::string_view view, std::string_view mode,
                             std::uint64_t run) const;

    /// Cells with zero runs, as "(model, view, mode)" strings.
    std::vector<std::string> missing_cells() const;

    bool operator==(const WeightStore& other) const {
        return config_ == other.config_ && records_ == other.records_;
    }

private:
    WeightStore() = default;

    std::size_t cell_index(std::size_t model, std::size_t view, std::size_t mode) const noexcept {
        return (model * config_.n_views() + view) * config_.n_modes() + mode;
    }

    StudyConfig config_;
    std::vector<WeightRecord> records_;
    // cell_offsets_[c]..cell_offsets_[c + 1] is the record range of cell c.
    std::vector<std::size_t> cell_offsets_;
    bool allow_missing_{false};
};

/// Parses canonical JSONL (one record per line) from a stream. `source` names
/// the stream in diagnostics.
std::vector<WeightRecord> parse_records(std::istream& in, const StudyConfig& config,
                                        std::string_view source,
                                        std::vector<Diagnostic>& diagnostics);

/// Runs every check a load would run and returns all findings (warnings
/// included) without throwing on data problems.
std::vector<Diagnostic> validate_inputs(std::span<const std::filesystem::path> paths,
                                        const StudyConfig& config, LoadOptions options = {});

WeightStore load_store(const std::filesystem::path& path, const StudyConfig& config,
                       LoadOptions options = {});
WeightStore load_store(std::span<const std::filesystem::path> paths, const StudyConfig& config,
                       LoadOptions options = {});
WeightStore load_store(std::istream& in, const StudyConfig& config, LoadOptions options = {});

/// Canonical JSONL serialization, one line per record in store order.
void write_jsonl(std::ostream& out, const WeightStore& store);

}  // namespace reprosel
