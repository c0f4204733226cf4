#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>

#include <json.hpp>

#include "reprosel/pipeline.hpp"

namespace reprosel {

/// Axis-labelled CSV: a header row and a leading column of axis ids, values
/// at 17 significant digits.
void write_matrix_csv(std::ostream& out, const ReproMatrix& m);

/// Inverse of write_matrix_csv. The result has MatrixKind `kind`.
ReproMatrix read_matrix_csv(std::istream& in, MatrixKind kind = MatrixKind::overall);

/// One row per (model, mode), one column per selected score.
void write_score_table_csv(std::ostream& out, const ScoreTable& table, std::span<const ScoreId> selected);

/// Scalars and full pairwise matrices for each selected score.
nlohmann::json score_table_to_json(const ScoreTable& table, std::span<const ScoreId> selected);

/// Biomarker index, optional label and mean |weight|, one row per biomarker.
void write_winner_weights_csv(std::ostream& out, std::span<const double> profile,
                              std::span<const std::string> labels);

/// Maps (mode id or "grand", matrix name) to the file the matrix was written to.
using MatrixPathFn = std::function<std::string(std::string_view mode, std::string_view matrix)>;

nlohmann::json selection_to_json(const Selection& s, std::span<const std::string> model_ids);
nlohmann::json report_to_json(const SelectionReport& report, const MatrixPathFn& matrix_path);

std::string_view to_string(RankOrder order);

}  // namespace reprosel
