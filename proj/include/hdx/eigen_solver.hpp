#pragma once

#include <Eigen/Dense>

namespace hdx {

/// Eigenvalues of a symmetric matrix, ascending. Destroys `a`.
Eigen::VectorXd symmetric_eigenvalues_inplace(Eigen::MatrixXd& a);

inline Eigen::VectorXd symmetric_eigenvalues(Eigen::MatrixXd a) {
    return symmetric_eigenvalues_inplace(a);
}

/// Full symmetric eigendecomposition (ascending eigenvalues).
void symmetric_eigen(const Eigen::MatrixXd& a, Eigen::VectorXd& values, Eigen::MatrixXd& vectors);

} // namespace hdx
