#pragma once

// JSON input/output: data-matrix and probability-table documents, verdicts
// and separable witnesses.

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

#include "calcert/criteria.hpp"
#include "calcert/datamatrix.hpp"
#include "calcert/witness.hpp"

namespace calcert {

/// Malformed input. `field()` is a JSON path such as "matrix[1][2]" or
/// "entries[3].p"; empty for syntax errors, whose message carries
/// line:column instead.
class InputError : public std::invalid_argument {
public:
    InputError(const std::string &what, std::string field) : std::invalid_argument(what), field_(std::move(field)) {}
    const std::string &field() const { return field_; }

private:
    std::string field_;
};

/// Accepts
///   {"type": "data_matrix", "settings": n, "matrix": [[...], ...]}
///   {"type": "probabilities", "n_a": n, "n_b": n,
///    "entries": [{"a": 1, "b": 1, "x": 1, "y": -1, "p": 0.25}, ...]}
/// Matrix entries and probabilities may be numbers or expression strings
/// such as "1-sqrt(3)". Throws InputError.
DataMatrix data_matrix_from_json(const nlohmann::json &doc);

/// Parses JSON text; `source` prefixes syntax diagnostics.
DataMatrix parse_data_matrix(std::string_view text, const std::string &source = "<input>");

/// Reads and parses a file. Throws InputError if it cannot be read.
DataMatrix load_data_matrix(const std::filesystem::path &path);

nlohmann::json to_json(const DataMatrix &d);

/// {"status", "criterion", "margin", "threshold", "value", ...}; optional
/// members are only emitted when present.
nlohmann::json to_json(const Verdict &v, const std::optional<std::string> &witness_file = std::nullopt);

nlohmann::json to_json(const SeparableWitness &w);

/// 17 significant digits, '.' decimal separator.
std::string format_number(double x);

}  // namespace calcert
