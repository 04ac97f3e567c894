#pragma once

// Data matrices: expectation values <A_i (x) B_j> with A_0 = B_0 = 1, so
// row 0 and column 0 carry the marginals and entry (0,0) is 1.

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "calcert/qmodel.hpp"

namespace calcert {

inline constexpr double kEntryTolerance = 1e-9;
inline constexpr double kTableTolerance = 1e-9;

class DataMatrix {
public:
    /// Square (n+1) x (n+1), entry (0,0) = 1 and every entry in [-1, 1]
    /// (both within kEntryTolerance). Throws std::invalid_argument.
    explicit DataMatrix(RealMatrix entries);

    /// Number of settings per side.
    std::size_t settings() const { return static_cast<std::size_t>(m_.rows()) - 1; }
    const RealMatrix &matrix() const { return m_; }
    double operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

private:
    RealMatrix m_;
};

/// The n x n block of full correlations (rows/cols 1..n of a DataMatrix).
class CorrelationBlock {
public:
    explicit CorrelationBlock(RealMatrix entries);

    const RealMatrix &matrix() const { return m_; }

private:
    RealMatrix m_;
};

/// Raised by ProbabilityTable validation; names the offending settings
/// (1-based, matching the JSON schema).
class TableError : public std::invalid_argument {
public:
    TableError(const std::string &what, std::size_t a, std::size_t b)
        : std::invalid_argument(what), a_(a), b_(b) {}
    std::size_t a() const { return a_; }
    std::size_t b() const { return b_; }

private:
    std::size_t a_;
    std::size_t b_;
};

/// Pr(x, y | a, b) with outcomes x, y in {+1, -1} and 1-based settings.
class ProbabilityTable {
public:
    ProbabilityTable(std::size_t n_a, std::size_t n_b);

    std::size_t n_a() const { return n_a_; }
    std::size_t n_b() const { return n_b_; }

    void set(std::size_t a, std::size_t b, int x, int y, double p);
    double at(std::size_t a, std::size_t b, int x, int y) const;

    /// Nonnegativity, per-setting normalization and no-signalling of both
    /// marginals, all within kTableTolerance. Throws TableError.
    void validate() const;

private:
    std::size_t index(std::size_t a, std::size_t b, int x, int y) const;

    std::size_t n_a_;
    std::size_t n_b_;
    std::vector<double> p_;
};

/// Throws TableError on invalid tables and std::invalid_argument when
/// n_a != n_b.
DataMatrix from_probabilities(const ProbabilityTable &table);

/// Outcome statistics of the given measurements via the POVMs (1 +- A)/2.
ProbabilityTable probabilities_from_state(const DensityOperator &rho, const MeasurementFamily &fam_a,
                                          const MeasurementFamily &fam_b);

/// Throws std::invalid_argument on dimension mismatch or unequal setting counts.
DataMatrix from_state(const DensityOperator &rho, const MeasurementFamily &fam_a, const MeasurementFamily &fam_b);

CorrelationBlock correlation_block(const DataMatrix &d);

/// Descending singular values.
std::vector<double> singular_values(const RealMatrix &m);

bool marginals_vanish(const DataMatrix &d, double tol);

/// Indices (1-based into the data matrix) of one retained setting subset.
struct SettingSelection {
    std::vector<Eigen::Index> rows;
    std::vector<Eigen::Index> cols;
};

/// Number of (k+1) x (k+1) setting submatrices, C(n, k)^2.
std::size_t setting_submatrix_count(std::size_t n, std::size_t k);

/// Calls `visit` for every submatrix that keeps row/col 0 and k settings per
/// side, in lexicographic (rows, cols) order.
void for_each_setting_submatrix(const DataMatrix &d, std::size_t k,
                                const std::function<void(const SettingSelection &, const RealMatrix &)> &visit);

/// Throws std::out_of_range unless 1 <= k <= n.
std::vector<DataMatrix> setting_submatrices(const DataMatrix &d, std::size_t k);

/// Relabels +1 <-> -1 on both sides: negates the marginals, keeps the
/// correlation block.
DataMatrix invert_marginals(const DataMatrix &d);

/// Two-setting data with marginals 1 - sqrt3 and correlation block
/// diag((15 - 8 sqrt3)/2, 1/2). Entangled under sharp measurements, yet
/// reproducible by a separable state with unsharp orthogonal ones.
DataMatrix counterexample_data_matrix();

}  // namespace calcert
