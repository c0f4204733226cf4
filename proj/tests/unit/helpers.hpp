#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "reprosel/study_config.hpp"
#include "reprosel/weight_store.hpp"

namespace test_support {

inline reprosel::StudyConfig make_config(std::size_t n_r, std::vector<std::string> models,
                                         std::vector<std::string> views, std::vector<std::string> modes,
                                         std::vector<std::size_t> thresholds) {
    reprosel::StudyConfig c;
    c.n_r = n_r;
    c.model_ids = std::move(models);
    c.view_ids = std::move(views);
    c.mode_ids = std::move(modes);
    c.thresholds = std::move(thresholds);
    return c;
}

inline std::string record_line(const std::string& model, const std::string& view, const std::string& mode,
                               std::uint64_t run, const std::vector<double>& weights) {
    std::ostringstream ss;
    ss << R"({"model":")" << model << R"(","view":")" << view << R"(","mode":")" << mode << R"(","run":)" << run
       << R"(,"weights":[)";
    for (std::size_t i = 0; i < weights.size(); ++i) {
        ss << (i ? "," : "") << weights[i];
    }
    ss << "]}";
    return ss.str();
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path temp_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("reprosel_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace test_support
