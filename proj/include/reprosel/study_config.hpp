#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace reprosel {

/// Raised for any malformed or inconsistent study description.
class StudyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Axes of a reproducibility study: biomarker count, model pool, views,
/// training modes and the top-k thresholds.
struct StudyConfig {
    std::size_t n_r{};
    std::vector<std::string> model_ids;
    std::vector<std::string> view_ids;
    std::vector<std::string> mode_ids;
    std::vector<std::size_t> thresholds;
    // Optional human-readable biomarker names (empty, or exactly n_r entries).
    std::vector<std::string> biomarker_labels;

    /// Throws StudyError if any invariant is violated.
    void validate() const;

    std::size_t n_models() const noexcept { return model_ids.size(); }
    std::size_t n_views() const noexcept { return view_ids.size(); }
    std::size_t n_modes() const noexcept { return mode_ids.size(); }
    std::size_t n_thresholds() const noexcept { return thresholds.size(); }

    std::optional<std::size_t> find_model(std::string_view id) const;
    std::optional<std::size_t> find_view(std::string_view id) const;
    std::optional<std::size_t> find_mode(std::string_view id) const;

    // Same as find_*, but throw StudyError("unknown ... id") on a miss.
    std::size_t model_index(std::string_view id) const;
    std::size_t view_index(std::string_view id) const;
    std::size_t mode_index(std::string_view id) const;

    bool operator==(const StudyConfig&) const = default;
};

StudyConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const StudyConfig& config);

/// Reads and validates a study config file.
StudyConfig load_config(const std::filesystem::path& path);

}  // namespace reprosel
