#include "reprosel/export.hpp"

#include <cstdlib>
#include <istream>
#include <ostream>

#include "reprosel/format.hpp"

namespace reprosel {

std::string_view to_string(RankOrder order) {
    return order == RankOrder::absolute ? "absolute" : "signed";
}

void write_matrix_csv(std::ostream& out, const ReproMatrix& m) {
    out << "id";
    for (const auto& id : m.axis_ids()) {
        out << ',' << csv_escape(id);
    }
    out << '\n';
    for (std::size_t i = 0; i < m.size(); ++i) {
        out << csv_escape(m.axis_ids()[i]);
        for (double v : m.row(i)) {
            out << ',' << format_double(v);
        }
        out << '\n';
    }
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

}  // namespace

ReproMatrix read_matrix_csv(std::istream& in, MatrixKind kind) {
    std::string line;
    std::vector<std::vector<std::string>> rows;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (!line.empty()) {
            rows.push_back(split_csv_line(line));
        }
    }
    if (rows.empty()) {
        throw StudyError("matrix CSV: empty input");
    }
    std::vector<std::string> ids(rows.front().begin() + 1, rows.front().end());
    if (rows.size() != ids.size() + 1) {
        throw StudyError("matrix CSV: expected " + std::to_string(ids.size()) + " data rows, got " +
                         std::to_string(rows.size() - 1));
    }
    ReproMatrix m(ids, kind);
    for (std::size_t i = 0; i < ids.size(); ++i) {
        const auto& row = rows[i + 1];
        if (row.size() != ids.size() + 1 || row.front() != ids[i]) {
            throw StudyError("matrix CSV: row " + std::to_string(i + 2) + " does not match the header");
        }
        for (std::size_t j = 0; j < ids.size(); ++j) {
            const std::string& cell = row[j + 1];
            char* end = nullptr;
            const double v = std::strtod(cell.c_str(), &end);
            if (cell.empty() || end != cell.c_str() + cell.size()) {
                throw StudyError("matrix CSV: bad number '" + cell + "' in row " + std::to_string(i + 2));
            }
            m(i, j) = v;
        }
    }
    return m;
}

void write_score_table_csv(std::ostream& out, const ScoreTable& table, std::span<const ScoreId> selected) {
    out << "model,mode";
    for (auto id : selected) {
        out << ',' << score_label(id);
    }
    out << '\n';
    for (std::size_t m = 0; m < table.model_ids.size(); ++m) {
        for (std::size_t o = 0; o < table.mode_ids.size(); ++o) {
            out << csv_escape(table.model_ids[m]) << ',' << csv_escape(table.mode_ids[o]);
            for (auto id : selected) {
                out << ',' << format_double(table.scalar(o, id, m));
            }
            out << '\n';
        }
    }
}

namespace {

nlohmann::json matrix_values(const ReproMatrix& m) {
    auto rows = nlohmann::json::array();
    for (std::size_t i = 0; i < m.size(); ++i) {
        rows.push_back(std::vector<double>(m.row(i).begin(), m.row(i).end()));
    }
    return rows;
}

}  // namespace

nlohmann::json score_table_to_json(const ScoreTable& table, std::span<const ScoreId> selected) {
    nlohmann::json j;
    j["models"] = table.model_ids;
    j["modes"] = table.mode_ids;
    auto scores = nlohmann::json::array();
    for (auto id : selected) {
        nlohmann::json s;
        s["id"] = score_label(id);
        s["polarity"] = score_polarity(id) == Polarity::higher_better ? "higher_better" : "lower_better";
        auto modes = nlohmann::json::array();
        for (std::size_t o = 0; o < table.mode_ids.size(); ++o) {
            const auto& ps = table.get(o, id);
            modes.push_back({{"mode", table.mode_ids[o]},
                             {"per_model", ps.per_model},
                             {"pairwise", matrix_values(ps.pairwise)}});
        }
        s["modes"] = std::move(modes);
        scores.push_back(std::move(s));
    }
    j["scores"] = std::move(scores);
    return j;
}

void write_winner_weights_csv(std::ostream& out, std::span<const double> profile,
                              std::span<const std::string> labels) {
    out << "biomarker,label,mean_abs_weight\n";
    for (std::size_t i = 0; i < profile.size(); ++i) {
        out << i << ',' << (i < labels.size() ? csv_escape(labels[i]) : std::string()) << ','
            << format_double(profile[i]) << '\n';
    }
}

nlohmann::json selection_to_json(const Selection& s, std::span<const std::string> model_ids) {
    nlohmann::json ordered = nlohmann::json::array();
    for (std::size_t i = 0; i < s.strengths.size(); ++i) {
        ordered.push_back({{"model", model_ids[i]}, {"strength", s.strengths[i]}});
    }
    return {{"winner", s.model_id}, {"winner_index", s.index}, {"tie", s.tie}, {"node_strengths", ordered}};
}

nlohmann::json report_to_json(const SelectionReport& report, const MatrixPathFn& matrix_path) {
    auto mode_json = [&](const ModeSelection& s) {
        auto j = selection_to_json(s.selection, report.model_ids);
        j["mode"] = s.mode_id;
        j["matrices"] = {{"view_average", matrix_path(s.mode_id, "view_average")},
                         {"rank_correlation", matrix_path(s.mode_id, "rank_correlation")},
                         {"overall", matrix_path(s.mode_id, "overall")}};
        return j;
    };
    nlohmann::json j;
    j["models"] = report.model_ids;
    auto modes = nlohmann::json::array();
    for (const auto& s : report.per_mode) {
        modes.push_back(mode_json(s));
    }
    j["per_mode"] = std::move(modes);
    j["grand"] = mode_json(report.grand);
    j["grand_winner"] = report.grand.selection.model_id;
    j["modes_agree"] = report.modes_agree;
    j["winner_weight_profile"] = report.winner_weight_profile;

    const auto& p = report.provenance;
    j["provenance"] = {
        {"aggregation_steps", p.aggregation_steps},
        {"model_pool", p.model_pool},
        {"views", p.views},
        {"modes", p.modes},
        {"thresholds", p.thresholds},
        {"n_r", p.n_r},
        {"run_ids", p.run_ids},
        {"rank_order", to_string(p.rank_order)},
        {"normalize_overall", p.normalize_overall},
        {"tie_tolerance", p.tie_tolerance},
        {"kl_epsilon", p.kl_epsilon},
    };
    return j;
}

}  // namespace reprosel
