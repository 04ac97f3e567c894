#pragma once

// Entanglement certification rules for data matrices under partial
// knowledge of the measurement devices.
//
// Every rule compares a criterion value against a threshold and reports
// Entangled only when the margin exceeds CriteriaOptions::epsilon. Rules
// that are necessary and sufficient may instead report a re-verified
// separable model (SeparableModelExists); rules that are only sufficient
// report Inconclusive.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "calcert/datamatrix.hpp"
#include "calcert/witness.hpp"

namespace calcert {

enum class MeasurementClass {
    SharpOrthogonal,
    SharpNonOrthogonal,
    UnsharpOrthogonal,
    QubitUncharacterized,
    DimensionBounded,
};

class ScenarioAssumption {
public:
    static ScenarioAssumption sharp_orthogonal() { return ScenarioAssumption(MeasurementClass::SharpOrthogonal, 2); }
    static ScenarioAssumption sharp_non_orthogonal() {
        return ScenarioAssumption(MeasurementClass::SharpNonOrthogonal, 2);
    }
    static ScenarioAssumption unsharp_orthogonal() {
        return ScenarioAssumption(MeasurementClass::UnsharpOrthogonal, 2);
    }
    static ScenarioAssumption qubit_uncharacterized() {
        return ScenarioAssumption(MeasurementClass::QubitUncharacterized, 2);
    }
    /// Throws std::invalid_argument for d < 2.
    static ScenarioAssumption dimension_bounded(int d);

    MeasurementClass kind() const { return kind_; }
    /// Local Hilbert-space dimension; 2 for all qubit classes.
    int dimension() const { return dim_; }
    /// True for the four qubit classes.
    bool is_qubit_class() const { return kind_ != MeasurementClass::DimensionBounded; }
    std::string name() const;

    friend bool operator==(const ScenarioAssumption &, const ScenarioAssumption &) = default;

private:
    ScenarioAssumption(MeasurementClass kind, int d) : kind_(kind), dim_(d) {}
    MeasurementClass kind_;
    int dim_;
};

enum class Status { Entangled, Inconclusive, SeparableModelExists };

std::string_view to_string(Status s);

struct Verdict {
    Status status = Status::Inconclusive;
    /// Identifier of the rule that produced the verdict, e.g. "ccnr",
    /// "zero_marginal_case2", "det".
    std::string criterion;
    /// Criterion value on the same scale as `threshold`.
    double value = 0.0;
    double threshold = 0.0;
    /// value - threshold, except for "det" where both sides are first taken
    /// to the power 1/e of the threshold's exponent (see det_criterion).
    double margin = 0.0;
    std::optional<SeparableWitness> witness;
    /// Free-form explanation code, e.g. "tight_bound" or
    /// "no_criterion_unsharp_marginals".
    std::string note;
    /// Largest CHSH value of the correlation block, when the rule computes it.
    std::optional<double> chsh;
    /// For "det": number of (sub)determinants evaluated and whether the
    /// sub-determinant scan was cut short by the budget.
    std::size_t determinants_evaluated = 0;
    bool scan_truncated = false;
};

struct CriteriaOptions {
    /// Strictness: Entangled requires margin > epsilon.
    double epsilon = 1e-9;
    double marginal_tolerance = 1e-9;
    double diagonal_tolerance = 1e-9;
    /// When false, no separable model is fitted and non-detections of tight
    /// rules are reported as Inconclusive (used by bulk sweeps).
    bool attach_witness = true;
    /// Upper bound on sub-determinants evaluated by a det_criterion scan.
    std::size_t max_submatrices = 200000;
};

/// Criterion: sum of singular values of the 3x3 correlation matrix > 2.
/// With vanishing marginals and largest singular value 1 the bound is tight
/// and a separable model is attached below it.
Verdict ccnr_corollary(const DataMatrix &t, const CriteriaOptions &opts = {});

/// Zero-marginal two-setting data, singular values l1 >= l2 of the
/// correlation block:
///   sharp orthogonal / unsharp orthogonal: l1 + l2 > 1
///   sharp non-orthogonal / qubit:          sqrt l1 + sqrt l2 > sqrt 2
/// Throws std::invalid_argument for nonzero marginals, n != 2, a
/// DimensionBounded scenario, or l1 > 1 under a square-root rule.
Verdict certify_zero_marginal(const DataMatrix &d, const ScenarioAssumption &scenario, const CriteriaOptions &opts = {});

/// Diagonal two-setting data under any qubit class: l1 + l2 > 1. Also
/// records chsh_max of the data. Throws std::invalid_argument for
/// non-diagonal data, |entries| > 1 or a DimensionBounded scenario.
Verdict certify_diagonal(const DataMatrix &d, const ScenarioAssumption &scenario, const CriteriaOptions &opts = {});

/// Sharp qubit measurements with arbitrary marginals:
/// sqrt l1 + sqrt l2 > sqrt 2 on the correlation block.
Verdict certify_sharp_general(const DataMatrix &d, const CriteriaOptions &opts = {});

/// Sharp orthogonal qubit measurements with marginals: the data matrix is
/// itself a correlation matrix, so both the full trace-norm rule and the
/// block rule l1 + l2 > 1 apply; returns the larger margin.
Verdict certify_sharp_orthogonal_marginals(const DataMatrix &d, const CriteriaOptions &opts = {});

/// Threshold used by det_criterion for n settings in dimension d, with its
/// exponent e (threshold = base^e).
struct DetThreshold {
    double value;
    double exponent;
};
DetThreshold det_threshold(std::size_t n, int d);

/// Dimension-bounded determinant rule: |det D| > threshold(n, d). With
/// `scan`, every setting submatrix is also tested (within
/// opts.max_submatrices) and the best margin reported. Sufficient only:
/// never reports SeparableModelExists. Throws std::invalid_argument for d < 2.
Verdict det_criterion(const DataMatrix &d, int dim, bool scan, const CriteriaOptions &opts = {});

/// max |<AB> + <AB'> + <A'B> + <A'B'>| with exactly one term negated.
/// Throws std::invalid_argument unless n = 2.
double chsh_max(const DataMatrix &d);

/// Routes to the strongest rule that is valid for the scenario and data.
Verdict certify(const DataMatrix &d, const ScenarioAssumption &scenario, const CriteriaOptions &opts = {});

}  // namespace calcert
