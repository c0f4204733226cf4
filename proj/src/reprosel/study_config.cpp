#include "reprosel/study_config.hpp"

#include <algorithm>
#include <fstream>
#include <set>

namespace reprosel {

namespace {

void require_distinct(const std::vector<std::string>& ids, std::string_view what) {
    if (ids.empty()) {
        throw StudyError("config: " + std::string(what) + " list is empty");
    }
    std::set<std::string_view> seen;
    for (const auto& id : ids) {
        if (id.empty()) {
            throw StudyError("config: empty " + std::string(what) + " id");
        }
        if (!seen.insert(id).second) {
            throw StudyError("config: duplicate " + std::string(what) + " id '" + id + "'");
        }
    }
}

std::optional<std::size_t> find_in(const std::vector<std::string>& ids, std::string_view id) {
    const auto it = std::find(ids.begin(), ids.end(), id);
    if (it == ids.end()) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(it - ids.begin());
}

std::size_t index_in(const std::vector<std::string>& ids, std::string_view id,
                     std::string_view what) {
    if (auto idx = find_in(ids, id)) {
        return *idx;
    }
    throw StudyError("unknown " + std::string(what) + " id '" + std::string(id) + "'");
}

}  // namespace

void StudyConfig::validate() const {
    if (n_r < 2) {
        throw StudyError("config: n_r must be at least 2, got " + std::to_string(n_r));
    }
    require_distinct(model_ids, "model");
    require_distinct(view_ids, "view");
    require_distinct(mode_ids, "mode");
    if (thresholds.empty()) {
        throw StudyError("config: thresholds list is empty");
    }
    for (std::size_t h = 0; h < thresholds.size(); ++h) {
        const auto k = thresholds[h];
        if (k < 1 || k > n_r) {
            throw StudyError("config: threshold " + std::to_string(k) + " outside [1, " +
                             std::to_string(n_r) + "]");
        }
        if (h > 0 && thresholds[h - 1] >= k) {
            throw StudyError("config: thresholds must be strictly increasing");
        }
    }
    if (!biomarker_labels.empty() && biomarker_labels.size() != n_r) {
        throw StudyError("config: biomarker_labels has " + std::to_string(biomarker_labels.size()) +
                         " entries, expected " + std::to_string(n_r));
    }
}

std::optional<std::size_t> StudyConfig::find_model(std::string_view id) const {
    return find_in(model_ids, id);
}
std::optional<std::size_t> StudyConfig::find_view(std::string_view id) const {
    return find_in(view_ids, id);
}
std::optional<std::size_t> StudyConfig::find_mode(std::string_view id) const {
    return find_in(mode_ids, id);
}

std::size_t StudyConfig::model_index(std::string_view id) const {
    return index_in(model_ids, id, "model");
}
std::size_t StudyConfig::view_index(std::string_view id) const {
    return index_in(view_ids, id, "view");
}
std::size_t StudyConfig::mode_index(std::string_view id) const {
    return index_in(mode_ids, id, "mode");
}

StudyConfig config_from_json(const nlohmann::json& j) {
    if (!j.is_object()) {
        throw StudyError("config: top-level value must be an object");
    }
    StudyConfig config;
    try {
        const auto n_r = j.at("n_r");
        if (!n_r.is_number_integer() || n_r.get<long long>() < 0) {
            throw StudyError("config: n_r must be a non-negative integer");
        }
        config.n_r = n_r.get<std::size_t>();
        config.model_ids = j.at("models").get<std::vector<std::string>>();
        config.view_ids = j.at("views").get<std::vector<std::string>>();
        config.mode_ids = j.at("modes").get<std::vector<std::string>>();
        for (const auto& k : j.at("thresholds")) {
            if (!k.is_number_integer() || k.get<long long>() < 1) {
                throw StudyError("config: thresholds must be positive integers");
            }
            config.thresholds.push_back(k.get<std::size_t>());
        }
        if (j.contains("biomarker_labels")) {
            config.biomarker_labels = j.at("biomarker_labels").get<std::vector<std::string>>();
        }
    } catch (const nlohmann::json::exception& e) {
        throw StudyError(std::string("config: ") + e.what());
    }
    config.validate();
    return config;
}

nlohmann::json config_to_json(const StudyConfig& config) {
    nlohmann::json j;
    j["n_r"] = config.n_r;
    j["models"] = config.model_ids;
    j["views"] = config.view_ids;
    j["modes"] = config.mode_ids;
    j["thresholds"] = config.thresholds;
    if (!config.biomarker_labels.empty()) {
        j["biomarker_labels"] = config.biomarker_labels;
    }
    return j;
}

StudyConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw StudyError("cannot open config file " + path.string());
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw StudyError("config " + path.string() + ": " + e.what());
    }
    return config_from_json(j);
}

}  // namespace reprosel
