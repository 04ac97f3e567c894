#include "calcert/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace calcert {

namespace {

constexpr double kPhysicalSingularValueSlack = 1e-9;

void require_two_settings(const DataMatrix &d, const char *rule) {
    if (d.settings() != 2) {
        throw std::invalid_argument(std::string(rule) + " needs exactly two settings per side, got " +
                                    std::to_string(d.settings()));
    }
}

void require_qubit(const ScenarioAssumption &s, const char *rule) {
    if (!s.is_qubit_class()) {
        throw std::invalid_argument(std::string(rule) + " applies to qubit measurement classes only");
    }
}

bool is_diagonal(const DataMatrix &d, double tol) {
    const RealMatrix &m = d.matrix();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (i != j && std::abs(m(i, j)) > tol) {
                return false;
            }
        }
    }
    return true;
}

Verdict make(std::string criterion, double value, double threshold, const CriteriaOptions &opts) {
    Verdict v;
    v.criterion = std::move(criterion);
    v.value = value;
    v.threshold = threshold;
    v.margin = value - threshold;
    v.status = v.margin > opts.epsilon ? Status::Entangled : Status::Inconclusive;
    return v;
}

// Attaches a sharp-orthogonal Bell-diagonal model for zero-marginal data
// when one exists and survives re-verification against `d`.
void attach_block_witness(Verdict &v, const DataMatrix &d, const CriteriaOptions &opts) {
    if (!opts.attach_witness || v.status == Status::Entangled) {
        return;
    }
    try {
        const Eigen::Matrix2d t2 = correlation_block(d).matrix();
        SeparableWitness w = fit_separable_model(t2);
        verify_witness(w, d);
        v.witness = std::move(w);
        v.status = Status::SeparableModelExists;
    } catch (const std::exception &) {
        // No verified model: the verdict stays Inconclusive.
    }
}

std::pair<double, double> block_singular_values(const DataMatrix &d) {
    const auto sv = singular_values(correlation_block(d).matrix());
    return {sv[0], sv[1]};
}

bool sum_rule_applies(const ScenarioAssumption &s) {
    return s.kind() == MeasurementClass::SharpOrthogonal || s.kind() == MeasurementClass::UnsharpOrthogonal;
}

const Verdict &better(const Verdict &a, const Verdict &b) { return b.margin > a.margin ? b : a; }

}  // namespace

ScenarioAssumption ScenarioAssumption::dimension_bounded(int d) {
    if (d < 2) {
        throw std::invalid_argument("dimension-bounded scenario needs d >= 2, got " + std::to_string(d));
    }
    return ScenarioAssumption(MeasurementClass::DimensionBounded, d);
}

std::string ScenarioAssumption::name() const {
    switch (kind_) {
        case MeasurementClass::SharpOrthogonal: return "sharp-orthogonal";
        case MeasurementClass::SharpNonOrthogonal: return "sharp";
        case MeasurementClass::UnsharpOrthogonal: return "unsharp-orthogonal";
        case MeasurementClass::QubitUncharacterized: return "qubit";
        case MeasurementClass::DimensionBounded: return "dim" + std::to_string(dim_);
    }
    return "unknown";
}

std::string_view to_string(Status s) {
    switch (s) {
        case Status::Entangled: return "Entangled";
        case Status::Inconclusive: return "Inconclusive";
        case Status::SeparableModelExists: return "SeparableModelExists";
    }
    return "unknown";
}

Verdict ccnr_corollary(const DataMatrix &t, const CriteriaOptions &opts) {
    require_two_settings(t, "ccnr_corollary");
    const auto sv = singular_values(t.matrix());
    const double sum = sv[0] + sv[1] + sv[2];
    Verdict v = make("ccnr", sum, 2.0, opts);
    if (v.status != Status::Entangled && marginals_vanish(t, opts.marginal_tolerance) &&
        std::abs(sv[0] - 1.0) <= kPhysicalSingularValueSlack) {
        attach_block_witness(v, t, opts);
    }
    return v;
}

Verdict certify_zero_marginal(const DataMatrix &d, const ScenarioAssumption &scenario, const CriteriaOptions &opts) {
    require_two_settings(d, "certify_zero_marginal");
    require_qubit(scenario, "certify_zero_marginal");
    if (!marginals_vanish(d, opts.marginal_tolerance)) {
        throw std::invalid_argument(
            "certify_zero_marginal: data has nonzero marginals; use certify_sharp_general or det_criterion");
    }
    const auto [l1, l2] = block_singular_values(d);
    // For the sum rule l1 > 1 still certifies entanglement (t0 t1 >= l1 forces
    // t0 + t1 > 2); the square-root rule assumes l1 <= 1.
    if (!sum_rule_applies(scenario) && l1 > 1.0 + kPhysicalSingularValueSlack) {
        throw std::invalid_argument("certify_zero_marginal: largest singular value " + std::to_string(l1) +
                                    " exceeds 1");
    }
    Verdict v;
    bool sqrt_rule = false;
    switch (scenario.kind()) {
        case MeasurementClass::SharpOrthogonal: v = make("zero_marginal_case1", l1 + l2, 1.0, opts); break;
        case MeasurementClass::SharpNonOrthogonal:
            v = make("zero_marginal_case2", std::sqrt(l1) + std::sqrt(l2), std::sqrt(2.0), opts);
            sqrt_rule = true;
            break;
        case MeasurementClass::UnsharpOrthogonal: v = make("zero_marginal_case3", l1 + l2, 1.0, opts); break;
        case MeasurementClass::QubitUncharacterized:
            v = make("zero_marginal_case4", std::sqrt(l1) + std::sqrt(l2), std::sqrt(2.0), opts);
            sqrt_rule = true;
            break;
        case MeasurementClass::DimensionBounded: break;  // rejected above
    }
    if (v.status != Status::Entangled) {
        // Sharp orthogonal measurements belong to every qubit class, so the
        // Bell-diagonal model is a valid witness whenever it exists.
        attach_block_witness(v, d, opts);
        if (v.status == Status::Inconclusive && sqrt_rule) {
            v.note = "tight_bound";
        }
    }
    return v;
}

Verdict certify_diagonal(const DataMatrix &d, const ScenarioAssumption &scenario, const CriteriaOptions &opts) {
    require_two_settings(d, "certify_diagonal");
    require_qubit(scenario, "certify_diagonal");
    if (!is_diagonal(d, opts.diagonal_tolerance)) {
        throw std::invalid_argument("certify_diagonal: data matrix is not diagonal");
    }
    const double l1 = std::abs(d(1, 1));
    const double l2 = std::abs(d(2, 2));
    Verdict v = make("diagonal", l1 + l2, 1.0, opts);
    v.chsh = chsh_max(d);
    attach_block_witness(v, d, opts);
    return v;
}

Verdict certify_sharp_general(const DataMatrix &d, const CriteriaOptions &opts) {
    require_two_settings(d, "certify_sharp_general");
    const auto [l1, l2] = block_singular_values(d);
    Verdict v = make("sharp_general", std::sqrt(l1) + std::sqrt(l2), std::sqrt(2.0), opts);
    if (marginals_vanish(d, opts.marginal_tolerance)) {
        attach_block_witness(v, d, opts);
    }
    return v;
}

Verdict certify_sharp_orthogonal_marginals(const DataMatrix &d, const CriteriaOptions &opts) {
    require_two_settings(d, "certify_sharp_orthogonal_marginals");
    const auto [l1, l2] = block_singular_values(d);
    const Verdict block = make("sharp_orthogonal_block", l1 + l2, 1.0, opts);
    const Verdict full = ccnr_corollary(d, opts);
    if (full.status == Status::SeparableModelExists) {
        return full;
    }
    return better(full, block);
}

DetThreshold det_threshold(std::size_t n, int d) {
    if (d < 2) {
        throw std::invalid_argument("det_criterion needs d >= 2, got " + std::to_string(d));
    }
    const auto nn = static_cast<double>(n);
    const auto dd = static_cast<double>(d);
    if (n == 2 && d == 3) {
        return {64.0 / 81.0, 2.0};
    }
    if (n >= static_cast<std::size_t>(d)) {
        return {std::pow((dd - 1.0) / nn, nn), nn};
    }
    return {std::pow(dd / (nn + 1.0), nn + 1.0), nn + 1.0};
}

Verdict det_criterion(const DataMatrix &d, int dim, bool scan, const CriteriaOptions &opts) {
    const std::size_t n = d.settings();
    (void)det_threshold(n, dim);  // validates dim

    Verdict best;
    best.criterion = "det";
    best.margin = -std::numeric_limits<double>::infinity();
    std::size_t evaluated = 0;
    auto consider = [&](const RealMatrix &m, std::size_t k) {
        const DetThreshold thr = det_threshold(k, dim);
        const double value = std::abs(m.partialPivLu().determinant());
        const double margin = std::pow(value, 1.0 / thr.exponent) - std::pow(thr.value, 1.0 / thr.exponent);
        ++evaluated;
        if (margin > best.margin) {
            best.value = value;
            best.threshold = thr.value;
            best.margin = margin;
        }
    };

    consider(d.matrix(), n);
    bool truncated = false;
    if (scan) {
        std::size_t budget = opts.max_submatrices;
        for (std::size_t k = n - 1; k >= 1; --k) {
            const std::size_t count = setting_submatrix_count(n, k);
            if (count > budget) {
                truncated = true;
                continue;
            }
            budget -= count;
            for_each_setting_submatrix(d, k, [&](const SettingSelection &, const RealMatrix &m) { consider(m, k); });
        }
    }
    best.status = best.margin > opts.epsilon ? Status::Entangled : Status::Inconclusive;
    best.note = best.status == Status::Entangled ? "" : "sufficient_only";
    best.determinants_evaluated = evaluated;
    best.scan_truncated = truncated;
    return best;
}

double chsh_max(const DataMatrix &d) {
    require_two_settings(d, "chsh_max");
    const RealMatrix e = correlation_block(d).matrix();
    const std::array<double, 4> terms{e(0, 0), e(0, 1), e(1, 0), e(1, 1)};
    const double total = terms[0] + terms[1] + terms[2] + terms[3];
    double best = 0.0;
    for (double t : terms) {
        best = std::max(best, std::abs(total - 2.0 * t));
    }
    return best;
}

Verdict certify(const DataMatrix &d, const ScenarioAssumption &scenario, const CriteriaOptions &opts) {
    if (!scenario.is_qubit_class()) {
        return det_criterion(d, scenario.dimension(), true, opts);
    }
    // Every qubit class is contained in the class of qubit measurements, so
    // the d = 2 determinant rule is a valid fallback throughout.
    if (d.settings() != 2) {
        return det_criterion(d, 2, true, opts);
    }

    const bool zero_marginals = marginals_vanish(d, opts.marginal_tolerance);
    if (zero_marginals && is_diagonal(d, opts.diagonal_tolerance) && std::abs(d(1, 1)) <= 1.0 &&
        std::abs(d(2, 2)) <= 1.0) {
        return certify_diagonal(d, scenario, opts);
    }
    if (zero_marginals &&
        (sum_rule_applies(scenario) || block_singular_values(d).first <= 1.0 + kPhysicalSingularValueSlack)) {
        return certify_zero_marginal(d, scenario, opts);
    }

    const bool unsharp_allowed = scenario.kind() == MeasurementClass::UnsharpOrthogonal ||
                                 scenario.kind() == MeasurementClass::QubitUncharacterized;
    if (!unsharp_allowed) {
        const Verdict v = scenario.kind() == MeasurementClass::SharpOrthogonal
                              ? certify_sharp_orthogonal_marginals(d, opts)
                              : certify_sharp_general(d, opts);
        if (v.status != Status::Inconclusive) {
            return v;
        }
        const Verdict det = det_criterion(d, 2, true, opts);
        return det.status == Status::Entangled ? det : v;
    }

    // Unsharp measurements with marginals: only the determinant rule applies.
    Verdict v = det_criterion(d, 2, true, opts);
    if (v.status == Status::Entangled) {
        return v;
    }
    v.note = "no_criterion_unsharp_marginals";
    if (opts.attach_witness) {
        if (auto w = fit_unsharp_orthogonal_model(d)) {
            verify_witness(*w, d);
            v.witness = std::move(w);
            v.status = Status::SeparableModelExists;
            v.criterion = "unsharp_orthogonal_model";
            v.note = "margin_from_det";
        }
    }
    return v;
}

}  // namespace calcert
