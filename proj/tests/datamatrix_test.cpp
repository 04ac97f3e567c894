#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "calcert/criteria.hpp"
#include "calcert/datamatrix.hpp"
#include "calcert/oracles.hpp"

using namespace calcert;

namespace {

RealMatrix diag_data(std::initializer_list<double> diag) {
    RealMatrix m = RealMatrix::Zero(diag.size(), diag.size());
    Eigen::Index i = 0;
    for (double v : diag) {
        m(i, i) = v;
        ++i;
    }
    return m;
}

}  // namespace

TEST(DataMatrix, ConstructorValidation) {
    EXPECT_THROW(DataMatrix(RealMatrix::Zero(2, 3)), std::invalid_argument);
    EXPECT_THROW(DataMatrix(diag_data({0.9, 0.5, 0.5})), std::invalid_argument);
    EXPECT_THROW(DataMatrix(diag_data({1.0, 1.2, 0.5})), std::invalid_argument);
    EXPECT_THROW(DataMatrix(RealMatrix::Ones(1, 1)), std::invalid_argument);
    const DataMatrix ok(diag_data({1.0, 0.5, -0.5}));
    EXPECT_EQ(ok.settings(), 2u);
}

TEST(ProbabilityTable, ValidationNamesSettings) {
    ProbabilityTable t(2, 2);
    for (std::size_t a = 1; a <= 2; ++a) {
        for (std::size_t b = 1; b <= 2; ++b) {
            for (int x : {1, -1}) {
                for (int y : {1, -1}) {
                    t.set(a, b, x, y, 0.25);
                }
            }
        }
    }
    EXPECT_NO_THROW(t.validate());

    ProbabilityTable bad = t;
    bad.set(2, 1, 1, 1, 0.35);
    bad.set(2, 1, -1, -1, 0.15);
    // Alice's marginal for setting 2 now depends on Bob's choice.
    try {
        bad.validate();
        FAIL() << "signalling table accepted";
    } catch (const TableError &e) {
        EXPECT_EQ(e.a(), 2u);
    }

    ProbabilityTable neg = t;
    neg.set(1, 2, 1, 1, -0.1);
    neg.set(1, 2, 1, -1, 0.35);
    EXPECT_THROW(neg.validate(), TableError);

    ProbabilityTable unnorm = t;
    unnorm.set(1, 1, 1, 1, 0.3);
    try {
        unnorm.validate();
        FAIL() << "unnormalized table accepted";
    } catch (const TableError &e) {
        EXPECT_EQ(e.a(), 1u);
        EXPECT_EQ(e.b(), 1u);
    }
    EXPECT_THROW(t.set(3, 1, 1, 1, 0.0), std::out_of_range);
}

TEST(FromProbabilities, UnequalSettingCountsRejected) {
    ProbabilityTable t(2, 3);
    EXPECT_THROW(from_probabilities(t), std::invalid_argument);
}

TEST(FromState, WernerCorrelations) {
    const double p = 0.4;
    const DataMatrix d = from_state(werner_state(p), pauli_family("xyz"), pauli_family("xyz"));
    RealMatrix expected = RealMatrix::Identity(4, 4) * -(1.0 - p);
    expected(0, 0) = 1.0;
    EXPECT_LT((d.matrix() - expected).norm(), 1e-14);
}

TEST(FromState, ProbabilityRoundTripMatchesDirectExpectations) {
    std::mt19937_64 rng(3);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const DensityOperator rho = random_separable_state(seed, 2, 3);
        const MeasurementFamily fa = random_measurement_family(rng, ScenarioAssumption::qubit_uncharacterized(), 3);
        const MeasurementFamily fb = random_measurement_family(rng, ScenarioAssumption::qubit_uncharacterized(), 3);
        const ProbabilityTable table = probabilities_from_state(rho, fa, fb);
        EXPECT_NO_THROW(table.validate());
        const DataMatrix via_table = from_probabilities(table);
        const DataMatrix direct = from_state(rho, fa, fb);
        EXPECT_LT((via_table.matrix() - direct.matrix()).cwiseAbs().maxCoeff(), 1e-13);
    }
}

TEST(FromState, RejectsMismatchedFamilies) {
    EXPECT_THROW(from_state(werner_state(0.0), pauli_family("xz"), pauli_family("xyz")), std::invalid_argument);
    EXPECT_THROW(from_state(bfp_state(0.0), pauli_family("xz"), pauli_family("xz")), std::invalid_argument);
}

TEST(SettingSubmatrices, CountsAndOrder) {
    EXPECT_EQ(setting_submatrix_count(3, 2), 9u);
    EXPECT_EQ(setting_submatrix_count(15, 7), 6435u * 6435u);
    const DataMatrix d = from_state(werner_state(0.2), pauli_family("xyz"), pauli_family("xyz"));
    std::vector<SettingSelection> seen;
    for_each_setting_submatrix(d, 2, [&](const SettingSelection &s, const RealMatrix &m) {
        EXPECT_EQ(m.rows(), 3);
        EXPECT_DOUBLE_EQ(m(0, 0), 1.0);
        seen.push_back(s);
    });
    ASSERT_EQ(seen.size(), 9u);
    EXPECT_EQ(seen.front().rows, (std::vector<Eigen::Index>{1, 2}));
    EXPECT_EQ(seen.front().cols, (std::vector<Eigen::Index>{1, 2}));
    EXPECT_EQ(seen[1].cols, (std::vector<Eigen::Index>{1, 3}));
    EXPECT_EQ(seen.back().rows, (std::vector<Eigen::Index>{2, 3}));
    EXPECT_EQ(setting_submatrices(d, 3).size(), 1u);
    EXPECT_THROW(setting_submatrices(d, 0), std::out_of_range);
    EXPECT_THROW(setting_submatrices(d, 4), std::out_of_range);
}

// Singular values of any submatrix are dominated index-wise by those of the
// full matrix.
TEST(SettingSubmatrices, SingularValueInterlacing) {
    std::mt19937_64 rng(5);
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const DensityOperator rho = random_separable_state(seed, 3, 4);
        const ScenarioAssumption dim3 = ScenarioAssumption::dimension_bounded(3);
        const DataMatrix d = from_state(rho, random_measurement_family(rng, dim3, 4),
                                        random_measurement_family(rng, dim3, 4));
        const std::vector<double> full = singular_values(d.matrix());
        for (std::size_t k = 1; k <= 3; ++k) {
            for (const DataMatrix &sub : setting_submatrices(d, k)) {
                const std::vector<double> s = singular_values(sub.matrix());
                for (std::size_t i = 0; i < s.size(); ++i) {
                    EXPECT_LE(s[i], full[i] + 1e-12);
                }
            }
        }
    }
}

TEST(InvertMarginals, KeepsBlockAndNegatesMarginals) {
    const DataMatrix d = counterexample_data_matrix();
    const DataMatrix inv = invert_marginals(d);
    EXPECT_DOUBLE_EQ(inv(0, 1), -d(0, 1));
    EXPECT_DOUBLE_EQ(inv(1, 0), -d(1, 0));
    EXPECT_EQ(correlation_block(inv).matrix(), correlation_block(d).matrix());
    const auto a = singular_values(d.matrix());
    const auto b = singular_values(inv.matrix());
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_NEAR(a[i], b[i], 1e-14);
    }
}

TEST(CounterexampleMatrix, FrozenEntries) {
    const DataMatrix d = counterexample_data_matrix();
    EXPECT_NEAR(d(0, 1), -0.7320508075688772, 1e-15);
    EXPECT_NEAR(d(1, 0), -0.7320508075688772, 1e-15);
    EXPECT_DOUBLE_EQ(d(0, 2), 0.0);
    EXPECT_DOUBLE_EQ(d(2, 0), 0.0);
    EXPECT_NEAR(d(1, 1), 0.5717967697244912, 1e-15);
    EXPECT_DOUBLE_EQ(d(2, 2), 0.5);
    EXPECT_DOUBLE_EQ(d(1, 2), 0.0);
    const auto sv = singular_values(d.matrix());
    EXPECT_NEAR(sv[0], 1.54861582, 1e-8);
    EXPECT_NEAR(sv[1], 0.5, 1e-8);
    EXPECT_NEAR(sv[2], 0.02318095, 1e-8);
}

TEST(CounterexampleMatrix, ReproducedByBothStates) {
    const ExampleStates s = example_states();
    const DataMatrix target = counterexample_data_matrix();
    const DataMatrix sep = from_state(s.separable, example_unsharp_family(), example_unsharp_family());
    const DataMatrix ent = from_state(s.entangled, pauli_family("xz"), pauli_family("xz"));
    EXPECT_LT((sep.matrix() - target.matrix()).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((ent.matrix() - target.matrix()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Marginals, VanishWithinTolerance) {
    EXPECT_TRUE(marginals_vanish(DataMatrix(diag_data({1.0, 0.3, 0.2})), 1e-9));
    EXPECT_FALSE(marginals_vanish(counterexample_data_matrix(), 1e-9));
}
