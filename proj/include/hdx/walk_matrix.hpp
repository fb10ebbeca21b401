#pragma once

#include <functional>
#include <variant>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace hdx {

using SparseRowMajor = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Square walk matrix stored dense or sparse depending on fill; callers see
/// one interface either way.
class WalkMatrix {
public:
    WalkMatrix() = default;
    explicit WalkMatrix(Eigen::MatrixXd m);
    explicit WalkMatrix(SparseRowMajor m);

    static WalkMatrix identity(Eigen::Index n);

    Eigen::Index rows() const;
    bool is_sparse() const { return std::holds_alternative<SparseRowMajor>(rep_); }

    double coeff(Eigen::Index i, Eigen::Index j) const;
    double min_coeff() const;

    Eigen::VectorXd row_sums() const;
    Eigen::VectorXd diagonal() const;

    Eigen::VectorXd apply(const Eigen::VectorXd& v) const;
    Eigen::MatrixXd apply(const Eigen::MatrixXd& m) const;

    /// Visits every structurally stored entry.
    void for_each_entry(const std::function<void(Eigen::Index, Eigen::Index, double)>& fn) const;

    /// Row-major iteration over a single row's stored entries.
    void for_each_in_row(Eigen::Index row,
                         const std::function<void(Eigen::Index, double)>& fn) const;

    Eigen::MatrixXd dense() const;

    double max_abs_diff(const WalkMatrix& other) const;

    /// Clamps entries in [-tol, 0) to zero; returns the most negative entry seen.
    double clamp_negatives(double tol);

    /// max_{i,j} |pi_i m_ij - pi_j m_ji|
    double self_adjointness_gap(const Eigen::VectorXd& pi) const;

    WalkMatrix scaled(double a) const;
    WalkMatrix plus(const WalkMatrix& other, double coeff) const;

private:
    std::variant<Eigen::MatrixXd, SparseRowMajor> rep_;
};

/// Picks the storage the fill ratio calls for (sparse below 25% fill; large
/// matrices stay sparse regardless to bound memory).
WalkMatrix pack_walk_matrix(SparseRowMajor m);

} // namespace hdx
