#pragma once

// Parameter sweeps over noisy state families and detection-region grids,
// with their CSV encodings.

#include <array>
#include <ostream>
#include <string>
#include <vector>

#include "calcert/criteria.hpp"
#include "calcert/datamatrix.hpp"

namespace calcert {

enum class SweepFamily { Werner, Bfp };
enum class SweepCriterion { Det, Ccnr };

struct SweepConfig {
    SweepFamily family = SweepFamily::Werner;
    SweepCriterion criterion = SweepCriterion::Det;
    /// Pauli axes measured on each side (Werner only; the BFP family always
    /// uses the 15 two-qubit Pauli products).
    std::string settings = "xyz";
    /// Local dimension for the determinant rule.
    int dimension = 2;
    /// Grid p = i / steps, i = 0..steps.
    int steps = 20;
};

struct SweepRow {
    double p;
    Verdict verdict;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    /// Detection boundary in p found by bisection on [0, 1].
    double threshold;
};

/// Data matrix of the family at noise level p.
DataMatrix sweep_family_data(const SweepConfig &config, double p);

/// Verdict of the configured criterion; the determinant rule is applied to
/// the full data matrix without sub-determinant scanning.
Verdict sweep_criterion(const SweepConfig &config, const DataMatrix &d, const CriteriaOptions &opts);

/// Throws std::invalid_argument for steps < 1 or a criterion that does not
/// apply to the family (ccnr needs two settings).
SweepResult run_sweep(const SweepConfig &config, const CriteriaOptions &opts = {});

/// Header "p,value,threshold,margin,status", one row per grid point and a
/// final "bisected_threshold,<p>" line with six decimals.
void write_sweep_csv(std::ostream &out, const SweepResult &result);

/// Columns of the detection-region table after (lambda1, lambda2).
inline constexpr std::array<const char *, 6> kRegionColumns{"case1", "case2",     "case3",
                                                            "case4", "det_qubit", "det_qutrit"};

struct RegionRow {
    double lambda1;
    double lambda2;
    std::array<bool, 6> detected;
};

/// Classifies diag(1, lambda1, lambda2) on a resolution x resolution grid
/// over [0, 1]^2 (lambda1 outer, lambda2 inner). Throws std::invalid_argument
/// for resolution < 2.
std::vector<RegionRow> detection_region(int resolution, const CriteriaOptions &opts = {});

void write_region_csv(std::ostream &out, const std::vector<RegionRow> &rows);

}  // namespace calcert
