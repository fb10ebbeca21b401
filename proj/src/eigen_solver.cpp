#include "hdx/eigen_solver.hpp"

#include <stdexcept>

#ifdef HDX_WITH_LAPACKE
#include <lapacke.h>
#endif

namespace hdx {

Eigen::VectorXd symmetric_eigenvalues_inplace(Eigen::MatrixXd& a) {
#ifdef HDX_WITH_LAPACKE
    const lapack_int n = static_cast<lapack_int>(a.rows());
    Eigen::VectorXd w(n);
    const lapack_int info =
        LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'N', 'L', n, a.data(), n, w.data());
    if (info != 0) throw std::runtime_error("dsyevd failed, info=" + std::to_string(info));
    return w;
#else
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
#endif
}

void symmetric_eigen(const Eigen::MatrixXd& a, Eigen::VectorXd& values, Eigen::MatrixXd& vectors) {
#ifdef HDX_WITH_LAPACKE
    const lapack_int n = static_cast<lapack_int>(a.rows());
    vectors = a;
    values.resize(n);
    const lapack_int info =
        LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n, vectors.data(), n, values.data());
    if (info != 0) throw std::runtime_error("dsyevd failed, info=" + std::to_string(info));
#else
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
    values = es.eigenvalues();
    vectors = es.eigenvectors();
#endif
}

} // namespace hdx
