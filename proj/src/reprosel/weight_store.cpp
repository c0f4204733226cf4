#include "reprosel/weight_store.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <tuple>

#include "reprosel/format.hpp"

namespace reprosel {

std::string Diagnostic::to_string() const {
    std::string out = severity == Severity::error ? "error: " : "warning: ";
    if (!source.empty()) {
        out += source;
        out += line > 0 ? ":" + std::to_string(line) + ": " : ": ";
    } else if (line > 0) {
        out += "line " + std::to_string(line) + ": ";
    }
    out += message;
    return out;
}

namespace {

std::string summarize(const std::vector<Diagnostic>& diagnostics) {
    for (const auto& d : diagnostics) {
        if (d.severity == Diagnostic::Severity::error) {
            std::string msg = d.to_string();
            const auto n_errors = std::count_if(diagnostics.begin(), diagnostics.end(), [](const auto& x) {
                return x.severity == Diagnostic::Severity::error;
            });
            if (n_errors > 1) {
                msg += " (and " + std::to_string(n_errors - 1) + " more)";
            }
            return msg;
        }
    }
    return "weight store error";
}

bool has_errors(const std::vector<Diagnostic>& diagnostics) {
    return std::any_of(diagnostics.begin(), diagnostics.end(), [](const auto& d) {
        return d.severity == Diagnostic::Severity::error;
    });
}

struct LocatedRecord {
    WeightRecord record;
    std::string source;
    std::size_t line{};
};

std::string describe_key(const WeightRecord& r) {
    return "(" + r.model_id + ", " + r.view_id + ", " + r.mode_id + ", " + std::to_string(r.run_id) + ")";
}

std::string where(const LocatedRecord& r) {
    if (r.line == 0) {
        return "";
    }
    return " at line " + std::to_string(r.line);
}

void add_error(std::vector<Diagnostic>& out, const LocatedRecord& r, std::string message) {
    out.push_back({Diagnostic::Severity::error, r.source, r.line, std::move(message)});
}

std::vector<LocatedRecord> parse_located(std::istream& in, std::string_view source,
                                         std::vector<Diagnostic>& diagnostics) {
    std::vector<LocatedRecord> out;
    std::string text;
    std::size_t line_no = 0;
    while (std::getline(in, text)) {
        ++line_no;
        if (!text.empty() && text.back() == '\r') {
            text.pop_back();
        }
        if (text.find_first_not_of(" \t") == std::string::npos) {
            continue;
        }
        auto fail = [&](const std::string& why) {
            diagnostics.push_back({Diagnostic::Severity::error, std::string(source), line_no,
                                   "malformed record at line " + std::to_string(line_no) + ": " + why});
        };
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(text);
        } catch (const nlohmann::json::exception& e) {
            fail(e.what());
            continue;
        }
        if (!j.is_object()) {
            fail("expected a JSON object");
            continue;
        }
        LocatedRecord located{{}, std::string(source), line_no};
        auto& rec = located.record;
        bool ok = true;
        for (const char* field : {"model", "view", "mode"}) {
            if (!j.contains(field) || !j[field].is_string()) {
                fail(std::string("field '") + field + "' missing or not a string");
                ok = false;
                break;
            }
        }
        if (!ok) {
            continue;
        }
        rec.model_id = j["model"].get<std::string>();
        rec.view_id = j["view"].get<std::string>();
        rec.mode_id = j["mode"].get<std::string>();
        const bool run_ok = j.contains("run") && (j["run"].is_number_unsigned() ||
                                                  (j["run"].is_number_integer() && j["run"].get<long long>() >= 0));
        if (!run_ok) {
            fail("field 'run' missing or not a non-negative integer");
            continue;
        }
        rec.run_id = j["run"].get<std::uint64_t>();
        if (!j.contains("weights") || !j["weights"].is_array()) {
            fail("field 'weights' missing or not an array");
            continue;
        }
        rec.weights.reserve(j["weights"].size());
        for (const auto& w : j["weights"]) {
            if (!w.is_number()) {
                fail("non-numeric weight entry");
                ok = false;
                break;
            }
            rec.weights.push_back(w.get<double>());
        }
        if (ok) {
            out.push_back(std::move(located));
        }
    }
    return out;
}

// Record-level and completeness checks; appends findings to `diagnostics`.
void check_records(const std::vector<LocatedRecord>& records, const StudyConfig& config,
                   const LoadOptions& options, std::vector<Diagnostic>& diagnostics) {
    std::map<std::tuple<std::size_t, std::size_t, std::size_t, std::uint64_t>, const LocatedRecord*> seen;
    std::vector<bool> present(config.n_models() * config.n_views() * config.n_modes(), false);

    for (const auto& located : records) {
        const auto& r = located.record;
        const auto model = config.find_model(r.model_id);
        const auto view = config.find_view(r.view_id);
        const auto mode = config.find_mode(r.mode_id);
        bool ids_ok = true;
        if (!model) {
            add_error(diagnostics, located, "unknown model id '" + r.model_id + "'" + where(located));
            ids_ok = false;
        }
        if (!view) {
            add_error(diagnostics, located, "unknown view id '" + r.view_id + "'" + where(located));
            ids_ok = false;
        }
        if (!mode) {
            add_error(diagnostics, located, "unknown mode id '" + r.mode_id + "'" + where(located));
            ids_ok = false;
        }
        if (r.weights.size() != config.n_r) {
            add_error(diagnostics, located,
                      "length mismatch" + where(located) + ": expected " + std::to_string(config.n_r) +
                          " weights, got " + std::to_string(r.weights.size()));
        }
        for (std::size_t i = 0; i < r.weights.size(); ++i) {
            if (!std::isfinite(r.weights[i])) {
                add_error(diagnostics, located,
                          "non-finite weight at index " + std::to_string(i) + where(located));
                break;
            }
        }
        if (!ids_ok) {
            continue;
        }
        const auto key = std::make_tuple(*model, *view, *mode, r.run_id);
        const auto [it, inserted] = seen.emplace(key, &located);
        if (!inserted) {
            std::string msg = "duplicate key " + describe_key(r) + where(located);
            if (it->second->line > 0) {
                msg += " (first seen at line " + std::to_string(it->second->line) + ")";
            }
            add_error(diagnostics, located, std::move(msg));
        }
        present[(*model * config.n_views() + *view) * config.n_modes() + *mode] = true;
    }

    for (std::size_t m = 0; m < config.n_models(); ++m) {
        for (std::size_t v = 0; v < config.n_views(); ++v) {
            for (std::size_t o = 0; o < config.n_modes(); ++o) {
                if (present[(m * config.n_views() + v) * config.n_modes() + o]) {
                    continue;
                }
                diagnostics.push_back({options.allow_missing ? Diagnostic::Severity::warning
                                                             : Diagnostic::Severity::error,
                                       "", 0,
                                       "missing cell (" + config.model_ids[m] + ", " + config.view_ids[v] +
                                           ", " + config.mode_ids[o] + "): no runs"});
            }
        }
    }
}

std::vector<LocatedRecord> parse_paths(std::span<const std::filesystem::path> paths,
                                       std::vector<Diagnostic>& diagnostics) {
    std::vector<LocatedRecord> all;
    for (const auto& path : paths) {
        std::ifstream in(path, std::ios::binary);
        if (!in) {
            diagnostics.push_back({Diagnostic::Severity::error, path.string(), 0, "cannot open input file"});
            continue;
        }
        auto part = parse_located(in, path.string(), diagnostics);
        std::move(part.begin(), part.end(), std::back_inserter(all));
    }
    return all;
}

}  // namespace

StoreError::StoreError(std::vector<Diagnostic> diagnostics)
    : std::runtime_error(summarize(diagnostics)), diagnostics_(std::move(diagnostics)) {}

WeightStore WeightStore::build(StudyConfig config, std::vector<WeightRecord> records,
                               LoadOptions options) {
    config.validate();
    std::vector<LocatedRecord> located;
    located.reserve(records.size());
    for (auto& r : records) {
        located.push_back({std::move(r), "", 0});
    }
    std::vector<Diagnostic> diagnostics;
    check_records(located, config, options, diagnostics);
    if (has_errors(diagnostics)) {
        throw StoreError(std::move(diagnostics));
    }

    WeightStore store;
    store.config_ = std::move(config);
    store.allow_missing_ = options.allow_missing;
    const auto& cfg = store.config_;

    std::vector<std::pair<std::tuple<std::size_t, std::size_t, std::size_t, std::uint64_t>, std::size_t>> order;
    order.reserve(located.size());
    for (std::size_t i = 0; i < located.size(); ++i) {
        const auto& r = located[i].record;
        order.push_back({{cfg.model_index(r.model_id), cfg.view_index(r.view_id),
                          cfg.mode_index(r.mode_id), r.run_id},
                         i});
    }
    std::sort(order.begin(), order.end());

    const std::size_t n_cells = cfg.n_models() * cfg.n_views() * cfg.n_modes();
    store.cell_offsets_.assign(n_cells + 1, 0);
    store.records_.reserve(order.size());
    for (const auto& [key, idx] : order) {
        const auto [m, v, o, run] = key;
        ++store.cell_offsets_[store.cell_index(m, v, o) + 1];
        store.records_.push_back(std::move(located[idx].record));
    }
    for (std::size_t c = 0; c < n_cells; ++c) {
        store.cell_offsets_[c + 1] += store.cell_offsets_[c];
    }
    return store;
}

std::span<const WeightRecord> WeightStore::records_for(std::string_view model, std::string_view view,
                                                       std::string_view mode) const {
    return records_for(config_.model_index(model), config_.view_index(view), config_.mode_index(mode));
}

std::span<const WeightRecord> WeightStore::records_for(std::size_t model, std::size_t view,
                                                       std::size_t mode) const {
    if (model >= config_.n_models() || view >= config_.n_views() || mode >= config_.n_modes()) {
        throw StudyError("cell index out of range");
    }
    const auto c = cell_index(model, view, mode);
    const auto first = cell_offsets_[c];
    const auto last = cell_offsets_[c + 1];
    if (first == last) {
        throw StudyError("missing cell (" + config_.model_ids[model] + ", " + config_.view_ids[view] + ", " +
                         config_.mode_ids[mode] + "): no runs");
    }
    return std::span<const WeightRecord>(records_).subspan(first, last - first);
}

const WeightRecord* WeightStore::find(std::string_view model, std::string_view view, std::string_view mode,
                                      std::uint64_t run) const {
    const auto m = config_.find_model(model);
    const auto v = config_.find_view(view);
    const auto o = config_.find_mode(mode);
    if (!m || !v || !o) {
        return nullptr;
    }
    const auto c = cell_index(*m, *v, *o);
    const auto first = records_.begin() + static_cast<std::ptrdiff_t>(cell_offsets_[c]);
    const auto last = records_.begin() + static_cast<std::ptrdiff_t>(cell_offsets_[c + 1]);
    const auto it = std::lower_bound(first, last, run,
                                     [](const WeightRecord& r, std::uint64_t id) { return r.run_id < id; });
    return (it != last && it->run_id == run) ? &*it : nullptr;
}

std::vector<std::string> WeightStore::missing_cells() const {
    std::vector<std::string> out;
    for (std::size_t m = 0; m < config_.n_models(); ++m) {
        for (std::size_t v = 0; v < config_.n_views(); ++v) {
            for (std::size_t o = 0; o < config_.n_modes(); ++o) {
                const auto c = cell_index(m, v, o);
                if (cell_offsets_[c] == cell_offsets_[c + 1]) {
                    out.push_back("(" + config_.model_ids[m] + ", " + config_.view_ids[v] + ", " +
                                  config_.mode_ids[o] + ")");
                }
            }
        }
    }
    return out;
}

std::vector<WeightRecord> parse_records(std::istream& in, const StudyConfig& config, std::string_view source,
                                        std::vector<Diagnostic>& diagnostics) {
    auto located = parse_located(in, source, diagnostics);
    check_records(located, config, LoadOptions{true}, diagnostics);
    std::vector<WeightRecord> out;
    out.reserve(located.size());
    for (auto& l : located) {
        out.push_back(std::move(l.record));
    }
    return out;
}

std::vector<Diagnostic> validate_inputs(std::span<const std::filesystem::path> paths, const StudyConfig& config,
                                        LoadOptions options) {
    std::vector<Diagnostic> diagnostics;
    const auto located = parse_paths(paths, diagnostics);
    check_records(located, config, options, diagnostics);
    return diagnostics;
}

namespace {

WeightStore finish_load(std::vector<LocatedRecord> located, std::vector<Diagnostic> diagnostics,
                        const StudyConfig& config, LoadOptions options) {
    check_records(located, config, options, diagnostics);
    if (has_errors(diagnostics)) {
        throw StoreError(std::move(diagnostics));
    }
    std::vector<WeightRecord> records;
    records.reserve(located.size());
    for (auto& l : located) {
        records.push_back(std::move(l.record));
    }
    return WeightStore::build(config, std::move(records), options);
}

}  // namespace

WeightStore load_store(std::span<const std::filesystem::path> paths, const StudyConfig& config,
                       LoadOptions options) {
    config.validate();
    std::vector<Diagnostic> diagnostics;
    auto located = parse_paths(paths, diagnostics);
    return finish_load(std::move(located), std::move(diagnostics), config, options);
}

WeightStore load_store(const std::filesystem::path& path, const StudyConfig& config, LoadOptions options) {
    return load_store(std::span<const std::filesystem::path>(&path, 1), config, options);
}

WeightStore load_store(std::istream& in, const StudyConfig& config, LoadOptions options) {
    config.validate();
    std::vector<Diagnostic> diagnostics;
    auto located = parse_located(in, "", diagnostics);
    return finish_load(std::move(located), std::move(diagnostics), config, options);
}

void write_jsonl(std::ostream& out, const WeightStore& store) {
    for (const auto& r : store.records()) {
        out << "{\"model\":" << nlohmann::json(r.model_id).dump() << ",\"view\":" << nlohmann::json(r.view_id).dump()
            << ",\"mode\":" << nlohmann::json(r.mode_id).dump() << ",\"run\":" << r.run_id << ",\"weights\":[";
        for (std::size_t i = 0; i < r.weights.size(); ++i) {
            if (i > 0) {
                out << ',';
            }
            // A bare "-0" would read back as the integer 0.
            out << (r.weights[i] == 0.0 && std::signbit(r.weights[i]) ? "-0.0" : format_double(r.weights[i]));
        }
        out << "]}\n";
    }
}

}  // namespace reprosel
