#include <gtest/gtest.h>

#include <cmath>
#include <string>

#include "calcert/expression.hpp"
#include "calcert/io.hpp"

using namespace calcert;
using nlohmann::json;

namespace {

json probabilities_doc(const ProbabilityTable &t) {
    json entries = json::array();
    for (std::size_t a = 1; a <= t.n_a(); ++a) {
        for (std::size_t b = 1; b <= t.n_b(); ++b) {
            for (int x : {1, -1}) {
                for (int y : {1, -1}) {
                    entries.push_back({{"a", a}, {"b", b}, {"x", x}, {"y", y}, {"p", t.at(a, b, x, y)}});
                }
            }
        }
    }
    return {{"type", "probabilities"}, {"n_a", t.n_a()}, {"n_b", t.n_b()}, {"entries", entries}};
}

std::string field_of(const json &doc) {
    try {
        data_matrix_from_json(doc);
    } catch (const InputError &e) {
        return e.field();
    }
    return "<accepted>";
}

}  // namespace

TEST(Expression, Arithmetic) {
    EXPECT_DOUBLE_EQ(evaluate_expression("1-sqrt(3)"), 1.0 - std::sqrt(3.0));
    EXPECT_DOUBLE_EQ(evaluate_expression("(15-8*sqrt(3))/2"), (15 - 8 * std::sqrt(3.0)) / 2);
    EXPECT_DOUBLE_EQ(evaluate_expression("  -0.5 * -2 + 1e-1 "), 1.1);
    EXPECT_DOUBLE_EQ(evaluate_expression("2-3-4"), -5.0);
    EXPECT_DOUBLE_EQ(evaluate_expression("8/4/2"), 1.0);
    EXPECT_DOUBLE_EQ(evaluate_expression("1−sqrt(3)"), 1.0 - std::sqrt(3.0));
}

TEST(Expression, ErrorsCarryColumn) {
    try {
        evaluate_expression("2+*3");
        FAIL() << "accepted";
    } catch (const ExpressionError &e) {
        EXPECT_EQ(e.column(), 2u);
    }
    EXPECT_THROW(evaluate_expression(""), ExpressionError);
    EXPECT_THROW(evaluate_expression("sqrt(2"), ExpressionError);
    EXPECT_THROW(evaluate_expression("abc"), ExpressionError);
    EXPECT_THROW(evaluate_expression("1/0"), ExpressionError);
    EXPECT_THROW(evaluate_expression("sqrt(-1)"), ExpressionError);
    EXPECT_THROW(evaluate_expression("1 2"), ExpressionError);
}

TEST(DataMatrixJson, ExpressionEntries) {
    const json doc = json::parse(R"json({
        "type": "data_matrix", "settings": 2,
        "matrix": [[1, "1-sqrt(3)", 0],
                   ["1−sqrt(3)", "(15-8*sqrt(3))/2", 0],
                   [0, 0, 0.5]]})json");
    const DataMatrix d = data_matrix_from_json(doc);
    EXPECT_LT((d.matrix() - counterexample_data_matrix().matrix()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(DataMatrixJson, RoundTrip) {
    const DataMatrix d = counterexample_data_matrix();
    const DataMatrix back = parse_data_matrix(to_json(d).dump());
    EXPECT_EQ(back.matrix(), d.matrix());
}

TEST(DataMatrixJson, FieldPaths) {
    EXPECT_EQ(field_of(json::array()), "$");
    EXPECT_EQ(field_of(json{{"settings", 1}}), "type");
    EXPECT_EQ(field_of(json{{"type", "tensor"}}), "type");
    EXPECT_EQ(field_of(json{{"type", "data_matrix"}, {"matrix", json::array()}}), "settings");
    EXPECT_EQ(field_of(json{{"type", "data_matrix"}, {"settings", 0}, {"matrix", json::array()}}), "settings");
    EXPECT_EQ(field_of(json::parse(R"({"type":"data_matrix","settings":1,"matrix":[[1,0]]})")), "matrix");
    EXPECT_EQ(field_of(json::parse(R"({"type":"data_matrix","settings":1,"matrix":[[1,0],[0]]})")), "matrix[1]");
    EXPECT_EQ(field_of(json::parse(R"({"type":"data_matrix","settings":1,"matrix":[[1,0],[0,"x"]]})")),
              "matrix[1][1]");
    EXPECT_EQ(field_of(json::parse(R"({"type":"data_matrix","settings":1,"matrix":[[1,0],[0,true]]})")),
              "matrix[1][1]");
    EXPECT_EQ(field_of(json::parse(R"({"type":"data_matrix","settings":1,"matrix":[[1,0],[0,1.5]]})")), "matrix");
}

TEST(ProbabilitiesJson, WernerTableMatchesDirectData) {
    const MeasurementFamily fam = pauli_family("xz");
    const DensityOperator rho = werner_state(0.3);
    const DataMatrix d = data_matrix_from_json(probabilities_doc(probabilities_from_state(rho, fam, fam)));
    EXPECT_LT((d.matrix() - from_state(rho, fam, fam).matrix()).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(ProbabilitiesJson, FieldPaths) {
    const MeasurementFamily fam = pauli_family("xz");
    const json good = probabilities_doc(probabilities_from_state(werner_state(0.3), fam, fam));

    json missing = good;
    missing["entries"].erase(5);
    EXPECT_EQ(field_of(missing), "entries");

    json duplicate = good;
    duplicate["entries"][5] = duplicate["entries"][4];
    EXPECT_EQ(field_of(duplicate), "entries[5]");

    json bad_p = good;
    bad_p["entries"][3]["p"] = "sqrt(";
    EXPECT_EQ(field_of(bad_p), "entries[3].p");

    json bad_x = good;
    bad_x["entries"][2]["x"] = 0;
    EXPECT_EQ(field_of(bad_x), "entries[2].x");

    json bad_a = good;
    bad_a["entries"][0]["a"] = 3;
    EXPECT_EQ(field_of(bad_a), "entries[0].a");

    json no_b = good;
    no_b["entries"][7].erase("b");
    EXPECT_EQ(field_of(no_b), "entries[7].b");

    json signalling = good;
    signalling["entries"][0]["p"] = signalling["entries"][0]["p"].get<double>() + 0.1;
    signalling["entries"][2]["p"] = signalling["entries"][2]["p"].get<double>() - 0.1;
    try {
        data_matrix_from_json(signalling);
        FAIL() << "signalling table accepted";
    } catch (const InputError &e) {
        EXPECT_EQ(e.field(), "entries");
        EXPECT_NE(std::string(e.what()).find("a=1"), std::string::npos);
    }

    json unequal = good;
    unequal["n_b"] = 3;
    EXPECT_EQ(field_of(unequal), "n_b");
}

TEST(ParseDataMatrix, SyntaxErrorsReportLineAndColumn) {
    try {
        parse_data_matrix("{\n  \"type\": \"data_matrix\",\n  \"settings\": 1,,\n}", "in.json");
        FAIL() << "accepted";
    } catch (const InputError &e) {
        EXPECT_TRUE(e.field().empty());
        EXPECT_EQ(std::string(e.what()).rfind("in.json:3:", 0), 0u) << e.what();
    }
}

TEST(LoadDataMatrix, MissingFile) {
    EXPECT_THROW(load_data_matrix("/nonexistent/dir/data.json"), InputError);
}

TEST(VerdictJson, Members) {
    Verdict v;
    v.status = Status::Entangled;
    v.criterion = "diagonal";
    v.value = 1.1;
    v.threshold = 1.0;
    v.margin = 0.1;
    v.chsh = 1.1;
    json j = to_json(v);
    EXPECT_EQ(j["status"], "Entangled");
    EXPECT_EQ(j["criterion"], "diagonal");
    EXPECT_DOUBLE_EQ(j["margin"].get<double>(), 0.1);
    EXPECT_DOUBLE_EQ(j["chsh"].get<double>(), 1.1);
    EXPECT_FALSE(j.contains("witness_file"));
    EXPECT_FALSE(j.contains("note"));
    EXPECT_FALSE(j.contains("determinants_evaluated"));

    Verdict det;
    det.criterion = "det";
    det.margin = -std::numeric_limits<double>::infinity();
    det.note = "sufficient_only";
    det.determinants_evaluated = 19;
    j = to_json(det, std::string("w.json"));
    EXPECT_EQ(j["status"], "Inconclusive");
    EXPECT_TRUE(j["margin"].is_null());
    EXPECT_EQ(j["note"], "sufficient_only");
    EXPECT_EQ(j["determinants_evaluated"], 19);
    EXPECT_EQ(j["scan_truncated"], false);
    EXPECT_EQ(j["witness_file"], "w.json");
}

TEST(WitnessJson, StateAndMeasurements) {
    const auto w = fit_unsharp_orthogonal_model(counterexample_data_matrix());
    ASSERT_TRUE(w.has_value());
    const json j = to_json(*w);
    ASSERT_TRUE(j.contains("state"));
    EXPECT_EQ(j["state"]["real"].size(), 4u);
    EXPECT_EQ(j["measurements_a"].size(), 2u);
    EXPECT_EQ(j["bell_weights"].size(), 4u);
}

TEST(FormatNumber, SeventeenSignificantDigits) {
    EXPECT_EQ(format_number(0.1), "0.10000000000000001");
    EXPECT_EQ(format_number(1.0), "1");
    EXPECT_EQ(std::stod(format_number(1.0 / 3.0)), 1.0 / 3.0);
}
