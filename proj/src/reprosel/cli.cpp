#include "reprosel/cli.hpp"

#include <openssl/evp.h>

#include <array>
#include <chrono>
#include <ctime>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "reprosel/export.hpp"
#include "reprosel/pipeline.hpp"
#include "reprosel/study_config.hpp"
#include "reprosel/weight_store.hpp"

namespace reprosel::cli {

namespace fs = std::filesystem;

std::string sha256_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw StudyError("cannot read " + path.string() + " for hashing");
    }
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
    std::array<char, 1 << 16> buf{};
    while (in) {
        in.read(buf.data(), buf.size());
        EVP_DigestUpdate(ctx, buf.data(), static_cast<std::size_t>(in.gcount()));
    }
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx, digest.data(), &len);
    EVP_MD_CTX_free(ctx);
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xF];
    }
    return out;
}

std::string safe_file_component(const std::string& id) {
    std::string out = id;
    for (auto& c : out) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '.' ||
                        c == '_' || c == '-';
        if (!ok) {
            c = '_';
        }
    }
    if (out == "." || out == "..") {
        out = "_" + out;
    }
    return out;
}

std::vector<std::size_t> parse_size_list(const std::string& text) {
    std::vector<std::size_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos) {
            throw std::invalid_argument("expected a comma-separated list of non-negative integers, got '" + text + "'");
        }
        out.push_back(static_cast<std::size_t>(std::stoull(item)));
    }
    if (out.empty()) {
        throw std::invalid_argument("empty list");
    }
    return out;
}

std::vector<ScoreId> parse_score_list(const std::string& text) {
    std::vector<ScoreId> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto id = score_from_label(item);
        if (!id) {
            throw std::invalid_argument("unknown score '" + item + "' (expected v.a, r.c, a.w.i, a.w.c, s.c, a.r.i, KL, L2)");
        }
        out.push_back(*id);
    }
    if (out.empty()) {
        throw std::invalid_argument("empty score list");
    }
    return out;
}

namespace {

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_text(const fs::path& path, const std::string& text) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw StudyError("cannot write " + path.string());
    }
    out << text;
    if (!out) {
        throw StudyError("write failed for " + path.string());
    }
}

StudyConfig resolve_config(const StudyInputs& inputs) {
    auto config = load_config(inputs.config);
    if (inputs.thresholds) {
        config.thresholds = *inputs.thresholds;
        config.validate();
    }
    return config;
}

void print_diagnostics(const std::vector<Diagnostic>& diagnostics, std::ostream& err) {
    for (const auto& d : diagnostics) {
        err << d.to_string() << '\n';
    }
}

/// Tracks the manifest of an output directory: written once up front, then
/// rewritten with every output file and its hash when the command finishes.
class Manifest {
public:
    Manifest(fs::path out_dir, nlohmann::json header) : out_dir_(std::move(out_dir)), doc_(std::move(header)) {
        doc_["created_at"] = utc_timestamp();
        doc_["status"] = "running";
        doc_["outputs"] = nlohmann::json::array();
        flush();
    }

    /// Writes `text` to out_dir/relative and records it.
    void emit(const std::string& relative, const std::string& text) {
        const auto path = out_dir_ / relative;
        write_text(path, text);
        outputs_.push_back(relative);
    }

    void finish(const std::string& status, const std::string& error = {}) {
        auto list = nlohmann::json::array();
        for (const auto& rel : outputs_) {
            list.push_back({{"path", rel}, {"sha256", sha256_file(out_dir_ / rel)}});
        }
        doc_["outputs"] = std::move(list);
        doc_["status"] = status;
        if (!error.empty()) {
            doc_["error"] = error;
        }
        flush();
    }

private:
    void flush() const { write_text(out_dir_ / "manifest.json", doc_.dump(2) + "\n"); }

    fs::path out_dir_;
    nlohmann::json doc_;
    std::vector<std::string> outputs_;
};

nlohmann::json run_header(const std::string& command, const RunOptions& options) {
    nlohmann::json j;
    j["tool"] = kToolName;
    j["version"] = kToolVersion;
    j["command"] = command;
    j["config"] = {{"path", options.study.config.string()}, {"sha256", sha256_file(options.study.config)}};
    auto inputs = nlohmann::json::array();
    for (const auto& p : options.study.inputs) {
        inputs.push_back({{"path", p.string()}, {"sha256", sha256_file(p)}});
    }
    j["inputs"] = std::move(inputs);
    j["output_dir"] = options.out_dir.string();
    std::vector<std::string> scores;
    for (auto id : options.scores) {
        scores.emplace_back(score_label(id));
    }
    j["scores"] = scores;
    j["flags"] = {{"allow_missing", options.study.allow_missing},
                  {"normalize_overall", options.normalize_overall},
                  {"signed_ranking", options.signed_ranking},
                  {"thresholds_override", options.study.thresholds ? nlohmann::json(*options.study.thresholds)
                                                                   : nlohmann::json(nullptr)}};
    return j;
}

// File names for ids; refuses ids that collide after sanitizing.
std::map<std::string, std::string> file_names(const std::vector<std::string>& ids, const std::string& what) {
    std::map<std::string, std::string> out;
    std::set<std::string> used;
    for (const auto& id : ids) {
        auto name = safe_file_component(id);
        if (!used.insert(name).second) {
            throw StudyError(what + " ids collide after sanitizing for file names: '" + name + "'");
        }
        out[id] = name;
    }
    return out;
}

std::string matrix_csv(const ReproMatrix& m) {
    std::ostringstream ss;
    write_matrix_csv(ss, m);
    return ss.str();
}

void emit_scores(Manifest& manifest, const ScoreTable& table, const std::vector<ScoreId>& scores) {
    std::ostringstream csv;
    write_score_table_csv(csv, table, scores);
    manifest.emit("scores.csv", csv.str());
    manifest.emit("scores.json", score_table_to_json(table, scores).dump(2) + "\n");
}

int run_study(const std::string& command, const RunOptions& options, std::ostream& err, bool full) {
    std::optional<Manifest> manifest;
    try {
        const auto config = resolve_config(options.study);
        fs::create_directories(options.out_dir);
        manifest.emplace(options.out_dir, run_header(command, options));

        const auto store = load_store(options.study.inputs, config, LoadOptions{options.study.allow_missing});
        AnalysisOptions analysis;
        analysis.rank_order = options.signed_ranking ? RankOrder::signed_ : RankOrder::absolute;
        analysis.normalize_overall = options.normalize_overall;
        const auto result = run_pipeline(store, analysis);

        emit_scores(*manifest, result.scores, options.scores);
        if (full) {
            const auto mode_dirs = file_names(config.mode_ids, "mode");
            const auto view_files = file_names(config.view_ids, "view");
            const auto model_files = file_names(config.model_ids, "model");
            auto mode_dir = [&](std::string_view mode) -> std::string {
                if (mode == "grand") {
                    return "heatmaps/grand";
                }
                return "heatmaps/mode-" + mode_dirs.at(std::string(mode));
            };
            auto matrix_path = [&](std::string_view mode, std::string_view matrix) {
                return mode_dir(mode) + "/" + std::string(matrix) + ".csv";
            };
            auto emit_selection = [&](const ModeSelection& s, std::string_view mode) {
                manifest->emit(matrix_path(mode, "view_average"), matrix_csv(s.view_average));
                manifest->emit(matrix_path(mode, "rank_correlation"), matrix_csv(s.rank_correlation));
                manifest->emit(matrix_path(mode, "overall"), matrix_csv(s.overall));
            };
            for (const auto& s : result.report.per_mode) {
                emit_selection(s, s.mode_id);
            }
            emit_selection(result.report.grand, "grand");

            for (const auto& mode : result.modes) {
                const std::string base = "intermediates/mode-" + mode_dirs.at(mode.mode_id) + "/";
                for (std::size_t v = 0; v < mode.view_matrices.size(); ++v) {
                    manifest->emit(base + "view_specific/" + view_files.at(config.view_ids[v]) + ".csv",
                                   matrix_csv(mode.view_matrices[v]));
                }
                for (std::size_t m = 0; m < mode.gnn_matrices.size(); ++m) {
                    manifest->emit(base + "gnn_specific/" + model_files.at(config.model_ids[m]) + ".csv",
                                   matrix_csv(mode.gnn_matrices[m]));
                }
            }

            manifest->emit("report.json", report_to_json(result.report, matrix_path).dump(2) + "\n");
            std::ostringstream weights;
            write_winner_weights_csv(weights, result.report.winner_weight_profile, config.biomarker_labels);
            manifest->emit("winner_weights.csv", weights.str());
            err << "winner: " << result.report.grand.selection.model_id
                << (result.report.grand.selection.tie ? " (tie)" : "") << '\n';
        }
        manifest->finish("complete");
        return 0;
    } catch (const StoreError& e) {
        print_diagnostics(e.diagnostics(), err);
        if (manifest) {
            manifest->finish("failed", e.what());
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        if (manifest) {
            manifest->finish("failed", e.what());
        }
    }
    return 1;
}

}  // namespace

int cmd_validate(const StudyInputs& options, std::ostream& err) {
    try {
        const auto config = resolve_config(options);
        const auto diagnostics = validate_inputs(options.inputs, config, LoadOptions{options.allow_missing});
        print_diagnostics(diagnostics, err);
        std::size_t n_errors = 0;
        for (const auto& d : diagnostics) {
            n_errors += d.severity == Diagnostic::Severity::error ? 1 : 0;
        }
        if (n_errors > 0) {
            err << n_errors << " error(s)\n";
            return 1;
        }
        const auto store = load_store(options.inputs, config, LoadOptions{options.allow_missing});
        err << "OK, n_m=" << config.n_models() << ", n_v=" << config.n_views() << ", n_modes=" << config.n_modes()
            << ", n_r=" << config.n_r << ", records=" << store.records().size() << '\n';
        return 0;
    } catch (const StoreError& e) {
        print_diagnostics(e.diagnostics(), err);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
    }
    return 1;
}

int cmd_run(const RunOptions& options, std::ostream& err) { return run_study("run", options, err, true); }

int cmd_scores(const RunOptions& options, std::ostream& err) { return run_study("scores", options, err, false); }

int cmd_select(const SelectOptions& options, std::ostream& err) {
    std::optional<Manifest> manifest;
    try {
        if (options.matrices.empty() || options.matrices.size() > 2) {
            throw StudyError("select expects one overall matrix or a view-average and a rank-correlation matrix");
        }
        nlohmann::json header;
        header["tool"] = kToolName;
        header["version"] = kToolVersion;
        header["command"] = "select";
        auto inputs = nlohmann::json::array();
        for (const auto& p : options.matrices) {
            inputs.push_back({{"path", p.string()}, {"sha256", sha256_file(p)}});
        }
        header["inputs"] = std::move(inputs);
        header["output_dir"] = options.out_dir.string();
        header["flags"] = {{"normalize_overall", options.normalize_overall}};
        fs::create_directories(options.out_dir);
        manifest.emplace(options.out_dir, header);

        auto read = [](const fs::path& p, MatrixKind kind) {
            std::ifstream in(p);
            if (!in) {
                throw StudyError("cannot open matrix file " + p.string());
            }
            return read_matrix_csv(in, kind);
        };
        ReproMatrix overall;
        if (options.matrices.size() == 1) {
            overall = read(options.matrices[0], MatrixKind::overall);
        } else {
            overall = build_overall(read(options.matrices[0], MatrixKind::averaged),
                                    read(options.matrices[1], MatrixKind::correlation), options.normalize_overall);
        }
        if (!overall.is_symmetric(1e-12)) {
            throw StudyError("overall matrix is not symmetric");
        }
        const auto selection = select_model(overall);
        manifest->emit("overall.csv", matrix_csv(overall));
        manifest->emit("selection.json", selection_to_json(selection, overall.axis_ids()).dump(2) + "\n");
        manifest->finish("complete");
        err << "winner: " << selection.model_id << (selection.tie ? " (tie)" : "") << '\n';
        return 0;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        if (manifest) {
            manifest->finish("failed", e.what());
        }
    }
    return 1;
}

int cmd_gen(const GenOptions& options, std::ostream& err) {
    try {
        const auto store = oracle_bench::generate_study(options.spec);
        fs::create_directories(options.out_dir);
        std::ostringstream jsonl;
        write_jsonl(jsonl, store);
        write_text(options.out_dir / "study.jsonl", jsonl.str());
        write_text(options.out_dir / "config.json", config_to_json(store.config()).dump(2) + "\n");
        err << "wrote " << store.records().size() << " records to " << (options.out_dir / "study.jsonl").string()
            << '\n';
        return 0;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
    }
    return 1;
}

}  // namespace reprosel::cli
