#include "calcert/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "calcert/expression.hpp"

namespace calcert {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string &field, const std::string &msg) {
    throw InputError(field + ": " + msg, field);
}

const json &member(const json &obj, const std::string &key, const std::string &path) {
    const auto it = obj.find(key);
    if (it == obj.end()) {
        fail(path.empty() ? key : path + "." + key, "missing required field");
    }
    return *it;
}

double number_at(const json &v, const std::string &field) {
    if (v.is_number()) {
        return v.get<double>();
    }
    if (v.is_string()) {
        try {
            return evaluate_expression(v.get<std::string>());
        } catch (const ExpressionError &e) {
            fail(field, e.what());
        }
    }
    fail(field, "expected a number or expression string");
}

long integer_at(const json &v, const std::string &field) {
    if (!v.is_number_integer()) {
        fail(field, "expected an integer");
    }
    return v.get<long>();
}

std::size_t count_at(const json &v, const std::string &field) {
    const long n = integer_at(v, field);
    if (n < 1) {
        fail(field, "must be at least 1");
    }
    return static_cast<std::size_t>(n);
}

DataMatrix data_matrix_document(const json &doc) {
    const std::size_t n = count_at(member(doc, "settings", ""), "settings");
    const json &rows = member(doc, "matrix", "");
    if (!rows.is_array() || rows.size() != n + 1) {
        fail("matrix", "expected an array of " + std::to_string(n + 1) + " rows");
    }
    RealMatrix m(n + 1, n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        const std::string row_path = "matrix[" + std::to_string(i) + "]";
        const json &row = rows[i];
        if (!row.is_array() || row.size() != n + 1) {
            fail(row_path, "expected an array of " + std::to_string(n + 1) + " entries");
        }
        for (std::size_t j = 0; j <= n; ++j) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                number_at(row[j], row_path + "[" + std::to_string(j) + "]");
        }
    }
    try {
        return DataMatrix(std::move(m));
    } catch (const std::invalid_argument &e) {
        fail("matrix", e.what());
    }
}

int outcome_at(const json &v, const std::string &field) {
    const long x = integer_at(v, field);
    if (x != 1 && x != -1) {
        fail(field, "outcome must be +1 or -1");
    }
    return static_cast<int>(x);
}

DataMatrix probabilities_document(const json &doc) {
    const std::size_t n_a = count_at(member(doc, "n_a", ""), "n_a");
    const std::size_t n_b = count_at(member(doc, "n_b", ""), "n_b");
    if (n_a != n_b) {
        fail("n_b", "only equal setting counts are supported (n_a = " + std::to_string(n_a) + ")");
    }
    const json &entries = member(doc, "entries", "");
    if (!entries.is_array()) {
        fail("entries", "expected an array");
    }
    ProbabilityTable table(n_a, n_b);
    std::vector<bool> seen(n_a * n_b * 4, false);
    for (std::size_t k = 0; k < entries.size(); ++k) {
        const std::string path = "entries[" + std::to_string(k) + "]";
        const json &e = entries[k];
        if (!e.is_object()) {
            fail(path, "expected an object");
        }
        const long a = integer_at(member(e, "a", path), path + ".a");
        const long b = integer_at(member(e, "b", path), path + ".b");
        if (a < 1 || static_cast<std::size_t>(a) > n_a) {
            fail(path + ".a", "setting out of range 1.." + std::to_string(n_a));
        }
        if (b < 1 || static_cast<std::size_t>(b) > n_b) {
            fail(path + ".b", "setting out of range 1.." + std::to_string(n_b));
        }
        const int x = outcome_at(member(e, "x", path), path + ".x");
        const int y = outcome_at(member(e, "y", path), path + ".y");
        const double p = number_at(member(e, "p", path), path + ".p");
        const std::size_t slot = ((static_cast<std::size_t>(a) - 1) * n_b + static_cast<std::size_t>(b) - 1) * 4 +
                                 (x == 1 ? 0 : 2) + (y == 1 ? 0 : 1);
        if (seen[slot]) {
            fail(path, "duplicate entry for this (a, b, x, y)");
        }
        seen[slot] = true;
        table.set(static_cast<std::size_t>(a), static_cast<std::size_t>(b), x, y, p);
    }
    for (std::size_t slot = 0; slot < seen.size(); ++slot) {
        if (!seen[slot]) {
            const std::size_t pair = slot / 4;
            fail("entries", "missing probability for a=" + std::to_string(pair / n_b + 1) +
                                " b=" + std::to_string(pair % n_b + 1) + " x=" + (slot % 4 < 2 ? "1" : "-1") +
                                " y=" + (slot % 2 == 0 ? "1" : "-1"));
        }
    }
    try {
        return from_probabilities(table);
    } catch (const TableError &e) {
        fail("entries", std::string(e.what()) + " (a=" + std::to_string(e.a()) + ", b=" + std::to_string(e.b()) + ")");
    }
}

json complex_matrix_json(const ComplexMatrix &m) {
    json re = json::array();
    json im = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json rr = json::array();
        json ri = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            rr.push_back(m(i, j).real());
            ri.push_back(m(i, j).imag());
        }
        re.push_back(std::move(rr));
        im.push_back(std::move(ri));
    }
    return {{"real", std::move(re)}, {"imag", std::move(im)}};
}

json family_json(const MeasurementFamily &f) {
    json out = json::array();
    for (const auto &o : f) {
        out.push_back(complex_matrix_json(o.matrix()));
    }
    return out;
}

// Line and column (1-based) of a byte offset.
std::pair<std::size_t, std::size_t> locate(std::string_view text, std::size_t offset) {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

}  // namespace

DataMatrix data_matrix_from_json(const json &doc) {
    if (!doc.is_object()) {
        fail("$", "expected a JSON object");
    }
    const json &type = member(doc, "type", "");
    if (!type.is_string()) {
        fail("type", "expected a string");
    }
    const std::string t = type.get<std::string>();
    if (t == "data_matrix") {
        return data_matrix_document(doc);
    }
    if (t == "probabilities") {
        return probabilities_document(doc);
    }
    fail("type", "unknown document type \"" + t + "\" (expected data_matrix or probabilities)");
}

DataMatrix parse_data_matrix(std::string_view text, const std::string &source) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error &e) {
        const std::size_t offset = e.byte > 0 ? e.byte - 1 : 0;
        const auto [line, col] = locate(text, offset);
        throw InputError(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": invalid JSON: " +
                             e.what(),
                         "");
    }
    return data_matrix_from_json(doc);
}

DataMatrix load_data_matrix(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError(path.string() + ": cannot open file", "");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_data_matrix(buf.str(), path.string());
}

json to_json(const DataMatrix &d) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < d.matrix().rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < d.matrix().cols(); ++j) {
            row.push_back(d(i, j));
        }
        rows.push_back(std::move(row));
    }
    return {{"type", "data_matrix"}, {"settings", d.settings()}, {"matrix", std::move(rows)}};
}

json to_json(const Verdict &v, const std::optional<std::string> &witness_file) {
    json out = {
        {"status", std::string(to_string(v.status))},
        {"criterion", v.criterion},
        {"margin", std::isfinite(v.margin) ? json(v.margin) : json(nullptr)},
        {"threshold", v.threshold},
        {"value", v.value},
    };
    if (!v.note.empty()) {
        out["note"] = v.note;
    }
    if (v.chsh) {
        out["chsh"] = *v.chsh;
    }
    if (v.criterion == "det") {
        out["determinants_evaluated"] = v.determinants_evaluated;
        out["scan_truncated"] = v.scan_truncated;
    }
    if (witness_file) {
        out["witness_file"] = *witness_file;
    }
    return out;
}

json to_json(const SeparableWitness &w) {
    return {
        {"type", "separable_witness"},
        {"state", complex_matrix_json(w.state.matrix())},
        {"measurements_a", family_json(w.measurements_a)},
        {"measurements_b", family_json(w.measurements_b)},
        {"reproduction_error", w.reproduction_error},
        {"ppt_min_eigenvalue", w.ppt_min_eigenvalue},
        {"bell_weights", w.bell_weights},
    };
}

std::string format_number(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace calcert
