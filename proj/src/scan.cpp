#include "calcert/scan.hpp"

#include <cstdio>
#include <stdexcept>

#include "calcert/io.hpp"
#include "calcert/oracles.hpp"

namespace calcert {

DataMatrix sweep_family_data(const SweepConfig &config, double p) {
    if (config.family == SweepFamily::Bfp) {
        const MeasurementFamily fam = product_pauli_family();
        return from_state(bfp_state(p), fam, fam);
    }
    const MeasurementFamily fam = pauli_family(config.settings);
    return from_state(werner_state(p), fam, fam);
}

Verdict sweep_criterion(const SweepConfig &config, const DataMatrix &d, const CriteriaOptions &opts) {
    if (config.criterion == SweepCriterion::Ccnr) {
        return ccnr_corollary(d, opts);
    }
    return det_criterion(d, config.dimension, false, opts);
}

SweepResult run_sweep(const SweepConfig &config, const CriteriaOptions &opts) {
    if (config.steps < 1) {
        throw std::invalid_argument("sweep needs at least one step");
    }
    if (config.criterion == SweepCriterion::Ccnr &&
        (config.family != SweepFamily::Werner || config.settings.size() != 2)) {
        throw std::invalid_argument("the ccnr criterion needs the werner family with exactly two settings");
    }
    CriteriaOptions quiet = opts;
    quiet.attach_witness = false;

    SweepResult result;
    for (int i = 0; i <= config.steps; ++i) {
        const double p = static_cast<double>(i) / config.steps;
        result.rows.push_back({p, sweep_criterion(config, sweep_family_data(config, p), quiet)});
    }
    result.threshold = threshold_bisection([&](double p) { return sweep_family_data(config, p); },
                                           [&](const DataMatrix &d) { return sweep_criterion(config, d, quiet); },
                                           0.0, 1.0);
    return result;
}

void write_sweep_csv(std::ostream &out, const SweepResult &result) {
    out << "p,value,threshold,margin,status\n";
    for (const auto &row : result.rows) {
        out << format_number(row.p) << ',' << format_number(row.verdict.value) << ','
            << format_number(row.verdict.threshold) << ',' << format_number(row.verdict.margin) << ','
            << to_string(row.verdict.status) << '\n';
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", result.threshold);
    out << "bisected_threshold," << buf << '\n';
}

std::vector<RegionRow> detection_region(int resolution, const CriteriaOptions &opts) {
    if (resolution < 2) {
        throw std::invalid_argument("region resolution must be at least 2");
    }
    CriteriaOptions quiet = opts;
    quiet.attach_witness = false;
    const std::array<ScenarioAssumption, 4> cases{
        ScenarioAssumption::sharp_orthogonal(), ScenarioAssumption::sharp_non_orthogonal(),
        ScenarioAssumption::unsharp_orthogonal(), ScenarioAssumption::qubit_uncharacterized()};

    std::vector<RegionRow> rows;
    rows.reserve(static_cast<std::size_t>(resolution) * static_cast<std::size_t>(resolution));
    for (int i = 0; i < resolution; ++i) {
        const double l1 = static_cast<double>(i) / (resolution - 1);
        for (int j = 0; j < resolution; ++j) {
            const double l2 = static_cast<double>(j) / (resolution - 1);
            RealMatrix m = RealMatrix::Zero(3, 3);
            m(0, 0) = 1.0;
            m(1, 1) = l1;
            m(2, 2) = l2;
            const DataMatrix d(std::move(m));
            RegionRow row{l1, l2, {}};
            for (std::size_t c = 0; c < cases.size(); ++c) {
                row.detected[c] = certify_zero_marginal(d, cases[c], quiet).status == Status::Entangled;
            }
            row.detected[4] = det_criterion(d, 2, false, quiet).status == Status::Entangled;
            row.detected[5] = det_criterion(d, 3, false, quiet).status == Status::Entangled;
            rows.push_back(row);
        }
    }
    return rows;
}

void write_region_csv(std::ostream &out, const std::vector<RegionRow> &rows) {
    out << "lambda1,lambda2";
    for (const char *c : kRegionColumns) {
        out << ',' << c;
    }
    out << '\n';
    for (const auto &row : rows) {
        out << format_number(row.lambda1) << ',' << format_number(row.lambda2);
        for (bool b : row.detected) {
            out << ',' << (b ? '1' : '0');
        }
        out << '\n';
    }
}

}  // namespace calcert
