#include "calcert/selftest.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <sstream>

#include "calcert/datamatrix.hpp"
#include "calcert/oracles.hpp"
#include "calcert/qmodel.hpp"
#include "calcert/scan.hpp"
#include "calcert/transforms.hpp"
#include "calcert/witness.hpp"

namespace calcert {

namespace {

// Margin of sqrt(l1) + sqrt(l2) - sqrt2 for the counterexample block.
constexpr double kCounterexampleSharpMargin = 0.04906566589446748;

std::string fmt(const char *format, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, format, a);
    return buf;
}

double max_abs_diff(const RealMatrix &a, const RealMatrix &b) { return (a - b).cwiseAbs().maxCoeff(); }

double relative_error(double value, double reference) {
    const double scale = std::max(std::abs(reference), 1e-300);
    return std::abs(value - reference) / scale;
}

CriteriaOptions without_witness(const CriteriaOptions &opts) {
    CriteriaOptions q = opts;
    q.attach_witness = false;
    return q;
}

Eigen::Matrix2d random_orthogonal_2x2(std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    std::bernoulli_distribution reflect(0.5);
    const double t = angle(rng);
    Eigen::Matrix2d q;
    q << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
    if (reflect(rng)) {
        q.col(1) *= -1.0;
    }
    return q;
}

// ---------------------------------------------------------------- AC1
bool counterexample_check(const SelftestOptions &o, std::string &detail) {
    const ExampleStates states = example_states();
    const MeasurementFamily fam = example_unsharp_family();
    const DataMatrix simulated = from_state(states.separable, fam, fam);
    const DataMatrix reference = counterexample_data_matrix();
    const double err = max_abs_diff(simulated.matrix(), reference.matrix());

    const Verdict sharp = certify(reference, ScenarioAssumption::sharp_non_orthogonal(), o.criteria);
    const Verdict unsharp = certify(reference, ScenarioAssumption::unsharp_orthogonal(), o.criteria);
    const bool witnessed = unsharp.status == Status::SeparableModelExists && unsharp.witness.has_value() &&
                           unsharp.witness->reproduction_error <= kWitnessTolerance;

    detail = "reproduction " + fmt("%.2e", err) + ", sharp " + std::string(to_string(sharp.status)) + " margin " +
             fmt("%.10f", sharp.margin) + ", unsharp-orthogonal " + std::string(to_string(unsharp.status));
    return err <= 1e-12 && sharp.status == Status::Entangled &&
           std::abs(sharp.margin - kCounterexampleSharpMargin) <= 1e-6 && witnessed;
}

// ---------------------------------------------------------------- AC2
bool werner_check(const SelftestOptions &o, std::string &detail) {
    const CriteriaOptions quiet = without_witness(o.criteria);
    const MeasurementFamily xyz = pauli_family("xyz");
    const MeasurementFamily xz = pauli_family("xz");
    const double det_threshold_p = threshold_bisection(
        [&](double p) { return from_state(werner_state(p), xyz, xyz); },
        [&](const DataMatrix &d) { return det_criterion(d, 2, true, quiet); }, 0.0, 1.0);
    const double ccnr_threshold_p = threshold_bisection(
        [&](double p) { return from_state(werner_state(p), xz, xz); },
        [&](const DataMatrix &d) { return ccnr_corollary(d, quiet); }, 0.0, 1.0);
    detail = "det " + fmt("%.9f", det_threshold_p) + ", ccnr " + fmt("%.9f", ccnr_threshold_p);
    return std::abs(det_threshold_p - 2.0 / 3.0) <= 1e-6 && std::abs(ccnr_threshold_p - 0.5) <= 1e-6;
}

// ---------------------------------------------------------------- AC3
bool bfp_check(const SelftestOptions &o, std::string &detail) {
    const PptResult ppt = ppt_check(bfp_state(0.0), 4, 4);
    const MeasurementFamily fam = product_pauli_family();
    double worst = 0.0;
    for (double p : {0.0, 0.2, 0.39}) {
        const DataMatrix d = from_state(bfp_state(p), fam, fam);
        const double det = std::abs(d.matrix().partialPivLu().determinant());
        worst = std::max(worst, relative_error(det, std::pow((1.0 - p) / 3.0, 15)));
    }
    const CriteriaOptions quiet = without_witness(o.criteria);
    const double threshold_p = threshold_bisection([&](double p) { return from_state(bfp_state(p), fam, fam); },
                                                   [&](const DataMatrix &d) { return det_criterion(d, 4, false, quiet); },
                                                   0.0, 1.0);
    detail = std::string("ppt ") + (ppt.ppt ? "yes" : "no") + " (min eig " + fmt("%.2e", ppt.min_eigenvalue) +
             "), det rel err " + fmt("%.2e", worst) + ", threshold " + fmt("%.9f", threshold_p);
    return ppt.ppt && worst <= 1e-10 && std::abs(threshold_p - 0.4) <= 1e-6;
}

// ---------------------------------------------------------------- AC4
bool lemma_check(const SelftestOptions &o, std::string &detail) {
    const int samples = o.quick ? 50 : 400;
    std::mt19937_64 rng(o.seed + 4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst1 = 0.0;
    double worst2 = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double l1 = u(rng);
        const double l2 = u(rng);
        worst1 = std::max(worst1, relative_error(lemma1_oracle(l1, l2), lemma1_closed_form(l1, l2)));
    }
    for (int i = 0; i < samples; ++i) {
        std::array<double, 3> l{u(rng), u(rng), u(rng)};
        std::sort(l.begin(), l.end(), std::greater<>());
        worst2 = std::max(worst2, relative_error(lemma2_oracle(l[0], l[1], l[2]), l[0] + l[1] + l[2]));
    }
    detail = std::to_string(samples) + " tuples each, max rel err lemma1 " + fmt("%.2e", worst1) + ", lemma2 " +
             fmt("%.2e", worst2);
    return worst1 <= 1e-5 && worst2 <= 1e-5;
}

// ---------------------------------------------------------------- AC5
bool singular_value_inequalities_check(const SelftestOptions &o, std::string &detail) {
    const int samples = o.quick ? 1000 : 10000;
    std::mt19937_64 rng(o.seed + 5);
    std::uniform_real_distribution<double> entry(-1.0, 1.0);
    std::uniform_real_distribution<double> angle(0.01, std::numbers::pi / 2 - 0.01);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    constexpr double slack = 1e-9;
    int violations = 0;
    double worst_product = 0.0;

    auto below = [&](double lhs, double rhs) { return lhs < rhs - slack * std::max(1.0, std::abs(rhs)); };

    for (int i = 0; i < samples; ++i) {
        Eigen::Matrix2d d2;
        d2 << entry(rng), entry(rng), entry(rng), entry(rng);
        const auto lam = singular_values(d2);

        // Tilted sharp measurements.
        const TiltAngle alpha(angle(rng));
        const TiltAngle beta(angle(rng));
        const Eigen::Matrix2d t2 = rotation_block(alpha) * d2 * rotation_block(beta).transpose();
        const auto t = singular_values(t2);
        const auto a = singular_values(rotation_block_inverse(alpha));
        const auto b = singular_values(rotation_block_inverse(beta));
        const double product_rhs = lam[0] * lam[1] / (a[0] * a[1] * b[0] * b[1]);
        const double product_err = std::abs(t[0] * t[1] - product_rhs) / std::max(1.0, std::abs(product_rhs));
        worst_product = std::max(worst_product, product_err);
        if (product_err > slack) {
            ++violations;
        }
        const double sq_rhs =
            (lam[0] + lam[1]) * (lam[0] + lam[1]) / (a[0] * a[0] * b[0] * b[0] + a[1] * a[1] * b[1] * b[1]);
        if (below(t[0] * t[0] + t[1] * t[1], sq_rhs)) {
            ++violations;
        }
        if (below((t[0] + t[1]) * (t[0] + t[1]), lemma1_closed_form(lam[0], lam[1]))) {
            ++violations;
        }

        // Sharpened unsharp measurements on zero-marginal data.
        auto random_sharpener = [&]() {
            const double x1 = 4.0 * unit(rng) - 2.0;
            const double x3 = 4.0 * unit(rng) - 2.0;
            return Sharpener(x1, 1.0 + std::abs(x1) + 2.0 * unit(rng), x3, 1.0 + std::abs(x3) + 2.0 * unit(rng));
        };
        const Sharpener sx = random_sharpener();
        const Sharpener sy = random_sharpener();
        Eigen::Matrix3d d3 = Eigen::Matrix3d::Zero();
        d3(0, 0) = 1.0;
        d3.bottomRightCorner<2, 2>() = d2;
        const auto t3 = singular_values(sx.matrix() * d3 * sy.matrix().transpose());
        if (below(t3[0], 1.0) || below(t3[0] * t3[1], lam[0]) || below(t3[0] * t3[1] * t3[2], lam[0] * lam[1])) {
            ++violations;
        }
        if (lam[0] <= 1.0 && below(t3[0] + t3[1] + t3[2], 1.0 + lam[0] + lam[1])) {
            ++violations;
        }
    }
    detail = std::to_string(samples) + " instances, " + std::to_string(violations) +
             " violations, max product identity err " + fmt("%.2e", worst_product);
    return violations == 0;
}

// ---------------------------------------------------------------- AC6
bool gram_determinant_check(const SelftestOptions &o, std::string &detail) {
    const int samples = o.quick ? 1000 : 10000;
    std::mt19937_64 rng(o.seed + 6);
    int violations = 0;
    int dependent = 0;
    double worst_ratio = std::numeric_limits<double>::infinity();
    double qutrit_min = std::numeric_limits<double>::infinity();
    for (int i = 0; i < samples; ++i) {
        const int d = 2 + i % 3;
        const std::size_t n = 2 + static_cast<std::size_t>((i / 3) % 2);
        const MeasurementFamily fam =
            random_measurement_family(rng, ScenarioAssumption::dimension_bounded(d), n);
        try {
            const GramSchmidtResult g = gram_schmidt(fam);
            const double det = std::abs(g.transform.determinant());
            const double bound = gram_determinant_bound(static_cast<std::size_t>(d), n);
            worst_ratio = std::min(worst_ratio, det / bound);
            if (det < bound - 1e-12) {
                ++violations;
            }
            if (std::abs(g.orthogonalization.determinant()) < 1.0 - 1e-9) {
                ++violations;
            }
            if (d == 3 && n == 2) {
                qutrit_min = std::min(qutrit_min, det);
                if (det < qutrit_gram_determinant_bound() - 1e-12) {
                    ++violations;
                }
            }
        } catch (const LinearDependenceError &) {
            ++dependent;
        }
    }
    const GramSchmidtResult eq = gram_schmidt(pauli_family("xz"));
    const double eq_err = std::abs(std::abs(eq.transform.determinant()) - std::pow(2.0, -1.5));
    detail = std::to_string(samples) + " families, " + std::to_string(violations) + " violations, " +
             std::to_string(dependent) + " dependent, min det/bound " + fmt("%.4f", worst_ratio) +
             ", qutrit min " + fmt("%.6f", qutrit_min) + ", equality err " + fmt("%.1e", eq_err);
    return violations == 0 && dependent * 100 < samples && eq_err <= 1e-12;
}

// ---------------------------------------------------------------- AC7
bool soundness_check(const SelftestOptions &o, std::string &detail) {
    const int per_class = o.quick ? 100 : 1000;
    struct Class {
        ScenarioAssumption scenario;
        int local_dim;
    };
    const std::vector<Class> classes{
        {ScenarioAssumption::sharp_orthogonal(), 2},      {ScenarioAssumption::sharp_non_orthogonal(), 2},
        {ScenarioAssumption::unsharp_orthogonal(), 2},    {ScenarioAssumption::qubit_uncharacterized(), 2},
        {ScenarioAssumption::dimension_bounded(2), 2},    {ScenarioAssumption::dimension_bounded(3), 3},
    };
    int false_positives = 0;
    int errors = 0;
    std::string first_error;
    double worst_margin = -std::numeric_limits<double>::infinity();
    std::string worst_rule;
    for (std::size_t c = 0; c < classes.size(); ++c) {
        const auto &cls = classes[c];
        for (int i = 0; i < per_class; ++i) {
            const std::uint64_t seed = o.seed * 7919 + c * 1000003 + static_cast<std::uint64_t>(i);
            std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
            try {
                DensityOperator rho = random_separable_state(seed, cls.local_dim, 1 + i % 4);
                if (cls.local_dim == 2 && i % 2 == 1) {
                    rho = pauli_twirl(rho);
                }
                const std::size_t n = (i % 3 == 0) ? 3 : 2;
                const MeasurementFamily fa = random_measurement_family(rng, cls.scenario, n);
                const MeasurementFamily fb = random_measurement_family(rng, cls.scenario, n);
                const Verdict v = certify(from_state(rho, fa, fb), cls.scenario, o.criteria);
                if (v.status == Status::Entangled) {
                    ++false_positives;
                }
                if (std::isfinite(v.margin) && v.margin > worst_margin) {
                    worst_margin = v.margin;
                    worst_rule = cls.scenario.name() + "/" + v.criterion;
                }
            } catch (const std::exception &e) {
                if (errors++ == 0) {
                    first_error = cls.scenario.name() + ": " + e.what();
                }
            }
        }
    }
    detail = std::to_string(per_class) + " states x " + std::to_string(classes.size()) + " classes, " +
             std::to_string(false_positives) + " Entangled, largest margin " + fmt("%.3e", worst_margin) + " (" +
             worst_rule + ")";
    if (errors > 0) {
        detail += ", " + std::to_string(errors) + " errors, first: " + first_error;
    }
    return false_positives == 0 && errors == 0;
}

// ---------------------------------------------------------------- AC8
struct Boundary {
    const char *column;
    // lambda2 on the boundary for given lambda1; > 1 or inf when absent.
    double (*curve)(double);
};

double linear_curve(double l1) { return 1.0 - l1; }
double sqrt_curve(double l1) {
    const double r = std::sqrt(2.0) - std::sqrt(l1);
    return r * r;
}
double qubit_det_curve(double l1) { return l1 > 0 ? 0.25 / l1 : std::numeric_limits<double>::infinity(); }
double qutrit_det_curve(double l1) { return l1 > 0 ? (64.0 / 81.0) / l1 : std::numeric_limits<double>::infinity(); }

bool beyond_bell_check(const SelftestOptions &o, std::string &detail) {
    RealMatrix m = RealMatrix::Zero(3, 3);
    m(0, 0) = 1.0;
    m(1, 1) = 0.7;
    m(2, 2) = 0.4;
    const DataMatrix d(m);
    const Verdict v = certify(d, ScenarioAssumption::qubit_uncharacterized(), o.criteria);
    const double chsh = chsh_max(d);
    const bool point_ok = v.status == Status::Entangled && std::abs(chsh - 1.1) <= 1e-12 && chsh <= 2.0;

    constexpr int resolution = 512;
    std::ostringstream csv;
    write_region_csv(csv, detection_region(resolution, o.criteria));

    // Parse the CSV back into a lambda1-major grid of flags.
    std::istringstream in(csv.str());
    std::string line;
    std::getline(in, line);
    std::vector<std::string> header;
    {
        std::istringstream hs(line);
        std::string cell;
        while (std::getline(hs, cell, ',')) {
            header.push_back(cell);
        }
    }
    std::vector<std::vector<double>> table;
    while (std::getline(in, line)) {
        std::vector<double> row;
        std::istringstream rs(line);
        std::string cell;
        while (std::getline(rs, cell, ',')) {
            row.push_back(std::stod(cell));
        }
        table.push_back(std::move(row));
    }
    if (table.size() != static_cast<std::size_t>(resolution) * resolution || header.size() != 8) {
        detail = "region CSV has unexpected shape";
        return false;
    }
    auto column_index = [&](const char *name) {
        for (std::size_t k = 0; k < header.size(); ++k) {
            if (header[k] == name) {
                return k;
            }
        }
        return header.size();
    };

    const std::array<Boundary, 6> boundaries{{{"case1", linear_curve},
                                              {"case2", sqrt_curve},
                                              {"case3", linear_curve},
                                              {"case4", sqrt_curve},
                                              {"det_qubit", qubit_det_curve},
                                              {"det_qutrit", qutrit_det_curve}}};
    const double cell = 1.0 / (resolution - 1);
    double worst = 0.0;
    int shape_errors = 0;
    for (const auto &b : boundaries) {
        const std::size_t col = column_index(b.column);
        if (col == header.size()) {
            ++shape_errors;
            continue;
        }
        for (int i = 0; i < resolution; ++i) {
            const auto base = static_cast<std::size_t>(i) * resolution;
            const double l1 = table[base][0];
            const double expected = b.curve(l1);
            int first = -1;
            for (int j = 0; j < resolution; ++j) {
                const bool on = table[base + j][col] != 0.0;
                if (on && first < 0) {
                    first = j;
                } else if (!on && first >= 0) {
                    ++shape_errors;  // detection region must be upward closed in lambda2
                }
            }
            if (first < 0) {
                // No detection in this column: the curve must leave [0, 1].
                if (expected <= 1.0 - cell) {
                    worst = std::max(worst, (1.0 - expected) / cell);
                }
                continue;
            }
            const double found = table[base + first][1];
            worst = std::max(worst, std::abs(found - std::max(expected, 0.0)) / cell);
        }
    }
    detail = std::string("diag(1,0.7,0.4) ") + std::string(to_string(v.status)) + " margin " +
             fmt("%.3f", v.margin) + ", chsh " + fmt("%.6f", chsh) + "; region " + std::to_string(resolution) +
             "^2 max boundary deviation " + fmt("%.3f", worst) + " cells";
    return point_ok && shape_errors == 0 && worst <= 1.0 + 1e-9;
}

// ---------------------------------------------------------------- AC9
bool fitter_check(const SelftestOptions &o, std::string &detail) {
    const int samples = o.quick ? 100 : 200;
    std::mt19937_64 rng(o.seed + 9);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    int failures = 0;
    for (int i = 0; i < samples; ++i) {
        const double l1 = u(rng);
        // Every tenth sample sits on the boundary l1 + l2 = 1.
        const double cap = std::min(l1, 1.0 - l1);
        const double l2 = (i % 10 == 0) ? cap : cap * u(rng);
        const Eigen::Matrix2d t2 =
            random_orthogonal_2x2(rng) * Eigen::Vector2d(l1, l2).asDiagonal() * random_orthogonal_2x2(rng).transpose();
        try {
            const SeparableWitness w = fit_separable_model(t2);
            RealMatrix target = RealMatrix::Zero(3, 3);
            target(0, 0) = 1.0;
            target.bottomRightCorner<2, 2>() = t2;
            const double err = verify_witness(w, DataMatrix(target));
            worst = std::max(worst, err);
            if (!ppt_check(w.state, 2, 2).ppt) {
                ++failures;
            }
        } catch (const std::exception &) {
            ++failures;
        }
    }
    detail = std::to_string(samples) + " blocks, " + std::to_string(failures) + " failures, max reproduction err " +
             fmt("%.2e", worst);
    return failures == 0 && worst <= kWitnessTolerance;
}

}  // namespace

const std::vector<AcceptanceCheck> &acceptance_checks() {
    static const std::vector<AcceptanceCheck> checks{
        {"AC1", "counterexample reproduction and verdicts", 1.0, counterexample_check},
        {"AC2", "Werner detection thresholds", 5.0, werner_check},
        {"AC3", "bound-entangled BFP threshold", 60.0, bfp_check},
        {"AC4", "optimization lemma oracles", 60.0, lemma_check},
        {"AC5", "singular-value inequality suite", 30.0, singular_value_inequalities_check},
        {"AC6", "Gram-Schmidt determinant bounds", 30.0, gram_determinant_check},
        {"AC7", "soundness on random separable states", 120.0, soundness_check},
        {"AC8", "detection beyond Bell violation and region curves", 30.0, beyond_bell_check},
        {"AC9", "Bell-diagonal separable fitter", 30.0, fitter_check},
    };
    return checks;
}

CheckResult run_check(const AcceptanceCheck &check, const SelftestOptions &opts) {
    CheckResult r;
    r.id = check.id;
    r.title = check.title;
    r.budget_seconds = check.budget_seconds;
    const auto start = std::chrono::steady_clock::now();
    bool ok = false;
    try {
        ok = check.body(opts, r.detail);
    } catch (const std::exception &e) {
        r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    r.passed = ok && r.seconds <= r.budget_seconds;
    if (ok && !r.passed) {
        r.detail += " (over runtime budget)";
    }
    return r;
}

std::vector<CheckResult> run_all_checks(const SelftestOptions &opts) {
    std::vector<CheckResult> out;
    for (const auto &c : acceptance_checks()) {
        out.push_back(run_check(c, opts));
    }
    return out;
}

std::string format_check_line(const CheckResult &r) {
    char timing[64];
    std::snprintf(timing, sizeof timing, "[%.3f s / %g s]", r.seconds, r.budget_seconds);
    return r.id + (r.passed ? " PASS  " : " FAIL  ") + r.title + "  " + timing + "  " + r.detail;
}

}  // namespace calcert
