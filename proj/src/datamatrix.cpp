#include "calcert/datamatrix.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace calcert {

namespace {

int outcome_slot(int x) {
    if (x == 1) {
        return 0;
    }
    if (x == -1) {
        return 1;
    }
    throw std::invalid_argument("outcome must be +1 or -1, got " + std::to_string(x));
}

// Lexicographic successor of a k-subset of {1..n}; false once exhausted.
bool next_combination(std::vector<Eigen::Index> &c, Eigen::Index n) {
    const auto k = static_cast<Eigen::Index>(c.size());
    for (Eigen::Index i = k - 1; i >= 0; --i) {
        if (c[i] < n - (k - 1 - i)) {
            ++c[i];
            for (Eigen::Index j = i + 1; j < k; ++j) {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    return false;
}

std::vector<Eigen::Index> first_combination(std::size_t k) {
    std::vector<Eigen::Index> c(k);
    for (std::size_t i = 0; i < k; ++i) {
        c[i] = static_cast<Eigen::Index>(i + 1);
    }
    return c;
}

}  // namespace

DataMatrix::DataMatrix(RealMatrix entries) : m_(std::move(entries)) {
    if (m_.rows() < 2 || m_.rows() != m_.cols()) {
        throw std::invalid_argument("data matrix must be square with at least one setting");
    }
    if (std::abs(m_(0, 0) - 1.0) > kEntryTolerance) {
        throw std::invalid_argument("data matrix entry (0,0) must be 1, got " + std::to_string(m_(0, 0)));
    }
    for (Eigen::Index i = 0; i < m_.rows(); ++i) {
        for (Eigen::Index j = 0; j < m_.cols(); ++j) {
            if (!std::isfinite(m_(i, j)) || std::abs(m_(i, j)) > 1.0 + kEntryTolerance) {
                throw std::invalid_argument("data matrix entry (" + std::to_string(i) + "," + std::to_string(j) +
                                            ") = " + std::to_string(m_(i, j)) + " lies outside [-1, 1]");
            }
        }
    }
    m_(0, 0) = 1.0;
}

CorrelationBlock::CorrelationBlock(RealMatrix entries) : m_(std::move(entries)) {
    if ((m_.array().abs() > 1.0 + kEntryTolerance).any()) {
        throw std::invalid_argument("correlation block entries must lie in [-1, 1]");
    }
}

ProbabilityTable::ProbabilityTable(std::size_t n_a, std::size_t n_b) : n_a_(n_a), n_b_(n_b), p_(n_a * n_b * 4, 0.0) {
    if (n_a == 0 || n_b == 0) {
        throw std::invalid_argument("probability table needs at least one setting per side");
    }
}

std::size_t ProbabilityTable::index(std::size_t a, std::size_t b, int x, int y) const {
    if (a < 1 || a > n_a_ || b < 1 || b > n_b_) {
        throw std::out_of_range("setting (" + std::to_string(a) + "," + std::to_string(b) + ") out of range");
    }
    return (((a - 1) * n_b_ + (b - 1)) * 2 + static_cast<std::size_t>(outcome_slot(x))) * 2 +
           static_cast<std::size_t>(outcome_slot(y));
}

void ProbabilityTable::set(std::size_t a, std::size_t b, int x, int y, double p) { p_[index(a, b, x, y)] = p; }

double ProbabilityTable::at(std::size_t a, std::size_t b, int x, int y) const { return p_[index(a, b, x, y)]; }

void ProbabilityTable::validate() const {
    auto here = [](std::size_t a, std::size_t b) {
        return " at setting (a=" + std::to_string(a) + ", b=" + std::to_string(b) + ")";
    };
    for (std::size_t a = 1; a <= n_a_; ++a) {
        for (std::size_t b = 1; b <= n_b_; ++b) {
            double total = 0.0;
            for (int x : {1, -1}) {
                for (int y : {1, -1}) {
                    const double p = at(a, b, x, y);
                    if (!std::isfinite(p) || p < -kTableTolerance) {
                        throw TableError("negative or non-finite probability" + here(a, b), a, b);
                    }
                    total += p;
                }
            }
            if (std::abs(total - 1.0) > kTableTolerance) {
                throw TableError("probabilities sum to " + std::to_string(total) + here(a, b), a, b);
            }
        }
    }
    // Alice's marginal must not depend on Bob's setting and vice versa.
    for (std::size_t a = 1; a <= n_a_; ++a) {
        const double ref = at(a, 1, 1, 1) + at(a, 1, 1, -1);
        for (std::size_t b = 2; b <= n_b_; ++b) {
            if (std::abs(at(a, b, 1, 1) + at(a, b, 1, -1) - ref) > kTableTolerance) {
                throw TableError("Alice's marginal depends on Bob's setting (signalling)" + here(a, b), a, b);
            }
        }
    }
    for (std::size_t b = 1; b <= n_b_; ++b) {
        const double ref = at(1, b, 1, 1) + at(1, b, -1, 1);
        for (std::size_t a = 2; a <= n_a_; ++a) {
            if (std::abs(at(a, b, 1, 1) + at(a, b, -1, 1) - ref) > kTableTolerance) {
                throw TableError("Bob's marginal depends on Alice's setting (signalling)" + here(a, b), a, b);
            }
        }
    }
}

DataMatrix from_probabilities(const ProbabilityTable &table) {
    table.validate();
    if (table.n_a() != table.n_b()) {
        throw std::invalid_argument("only square scenarios are supported (n_a = " + std::to_string(table.n_a()) +
                                    ", n_b = " + std::to_string(table.n_b()) + ")");
    }
    const auto n = static_cast<Eigen::Index>(table.n_a());
    RealMatrix d = RealMatrix::Zero(n + 1, n + 1);
    d(0, 0) = 1.0;
    for (Eigen::Index a = 1; a <= n; ++a) {
        for (Eigen::Index b = 1; b <= n; ++b) {
            double corr = 0.0;
            for (int x : {1, -1}) {
                for (int y : {1, -1}) {
                    corr += x * y * table.at(a, b, x, y);
                }
            }
            d(a, b) = corr;
        }
    }
    for (Eigen::Index a = 1; a <= n; ++a) {
        d(a, 0) = (table.at(a, 1, 1, 1) + table.at(a, 1, 1, -1)) - (table.at(a, 1, -1, 1) + table.at(a, 1, -1, -1));
    }
    for (Eigen::Index b = 1; b <= n; ++b) {
        d(0, b) = (table.at(1, b, 1, 1) + table.at(1, b, -1, 1)) - (table.at(1, b, 1, -1) + table.at(1, b, -1, -1));
    }
    return DataMatrix(std::move(d));
}

ProbabilityTable probabilities_from_state(const DensityOperator &rho, const MeasurementFamily &fam_a,
                                          const MeasurementFamily &fam_b) {
    ProbabilityTable table(fam_a.size(), fam_b.size());
    for (std::size_t a = 0; a < fam_a.size(); ++a) {
        const Povm pa = povm_from_observable(fam_a[a]);
        for (std::size_t b = 0; b < fam_b.size(); ++b) {
            const Povm pb = povm_from_observable(fam_b[b]);
            for (int x : {1, -1}) {
                const ComplexMatrix &ma = x == 1 ? pa.plus.matrix() : pa.minus.matrix();
                for (int y : {1, -1}) {
                    const ComplexMatrix &mb = y == 1 ? pb.plus.matrix() : pb.minus.matrix();
                    table.set(a + 1, b + 1, x, y, expectation(rho, ma, mb));
                }
            }
        }
    }
    return table;
}

DataMatrix from_state(const DensityOperator &rho, const MeasurementFamily &fam_a, const MeasurementFamily &fam_b) {
    if (fam_a.size() != fam_b.size()) {
        throw std::invalid_argument("only square scenarios are supported");
    }
    if (fam_a.dim() * fam_b.dim() != rho.dim()) {
        throw std::invalid_argument("dimension mismatch between state and measurement families");
    }
    const auto n = static_cast<Eigen::Index>(fam_a.size());
    const auto da = static_cast<Eigen::Index>(fam_a.dim());
    const auto db = static_cast<Eigen::Index>(fam_b.dim());
    std::vector<ComplexMatrix> ops_a{ComplexMatrix::Identity(da, da)};
    std::vector<ComplexMatrix> ops_b{ComplexMatrix::Identity(db, db)};
    for (const auto &o : fam_a) {
        ops_a.push_back(o.matrix());
    }
    for (const auto &o : fam_b) {
        ops_b.push_back(o.matrix());
    }
    RealMatrix d(n + 1, n + 1);
    for (Eigen::Index i = 0; i <= n; ++i) {
        for (Eigen::Index j = 0; j <= n; ++j) {
            d(i, j) = expectation(rho, ops_a[i], ops_b[j]);
        }
    }
    return DataMatrix(std::move(d));
}

CorrelationBlock correlation_block(const DataMatrix &d) {
    const auto n = static_cast<Eigen::Index>(d.settings());
    return CorrelationBlock(d.matrix().bottomRightCorner(n, n));
}

std::vector<double> singular_values(const RealMatrix &m) {
    if (m.size() == 0) {
        return {};
    }
    Eigen::JacobiSVD<RealMatrix> svd(m);
    const RealVector &s = svd.singularValues();
    std::vector<double> out(s.data(), s.data() + s.size());
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
}

bool marginals_vanish(const DataMatrix &d, double tol) {
    const auto n = static_cast<Eigen::Index>(d.settings());
    for (Eigen::Index i = 1; i <= n; ++i) {
        if (std::abs(d(i, 0)) > tol || std::abs(d(0, i)) > tol) {
            return false;
        }
    }
    return true;
}

std::size_t setting_submatrix_count(std::size_t n, std::size_t k) {
    if (k > n) {
        return 0;
    }
    std::size_t c = 1;
    for (std::size_t i = 1; i <= k; ++i) {
        c = c * (n - k + i) / i;
    }
    return c * c;
}

void for_each_setting_submatrix(const DataMatrix &d, std::size_t k,
                                const std::function<void(const SettingSelection &, const RealMatrix &)> &visit) {
    const std::size_t n = d.settings();
    if (k < 1 || k > n) {
        throw std::out_of_range("setting subset size k=" + std::to_string(k) + " must lie in [1, " +
                                std::to_string(n) + "]");
    }
    const auto size = static_cast<Eigen::Index>(k + 1);
    const auto nn = static_cast<Eigen::Index>(n);
    SettingSelection sel;
    RealMatrix sub(size, size);
    sel.rows = first_combination(k);
    do {
        sel.cols = first_combination(k);
        do {
            for (Eigen::Index i = 0; i < size; ++i) {
                const Eigen::Index r = i == 0 ? 0 : sel.rows[i - 1];
                for (Eigen::Index j = 0; j < size; ++j) {
                    const Eigen::Index c = j == 0 ? 0 : sel.cols[j - 1];
                    sub(i, j) = d(r, c);
                }
            }
            visit(sel, sub);
        } while (next_combination(sel.cols, nn));
    } while (next_combination(sel.rows, nn));
}

std::vector<DataMatrix> setting_submatrices(const DataMatrix &d, std::size_t k) {
    std::vector<DataMatrix> out;
    for_each_setting_submatrix(d, k, [&](const SettingSelection &, const RealMatrix &m) { out.emplace_back(m); });
    return out;
}

DataMatrix invert_marginals(const DataMatrix &d) {
    RealMatrix m = d.matrix();
    const auto n = m.rows();
    m.col(0).tail(n - 1) *= -1.0;
    m.row(0).tail(n - 1) *= -1.0;
    return DataMatrix(std::move(m));
}

DataMatrix counterexample_data_matrix() {
    const double s3 = std::sqrt(3.0);
    RealMatrix m = RealMatrix::Zero(3, 3);
    m(0, 0) = 1.0;
    m(0, 1) = m(1, 0) = 1.0 - s3;
    m(1, 1) = (15.0 - 8.0 * s3) / 2.0;
    m(2, 2) = 0.5;
    return DataMatrix(std::move(m));
}

}  // namespace calcert
