#include "hdx/walk_matrix.hpp"

#include <cmath>

namespace hdx {

WalkMatrix::WalkMatrix(Eigen::MatrixXd m) : rep_(std::move(m)) {}
WalkMatrix::WalkMatrix(SparseRowMajor m) : rep_(std::move(m)) {}

WalkMatrix WalkMatrix::identity(Eigen::Index n) {
    SparseRowMajor id(n, n);
    id.setIdentity();
    return WalkMatrix(std::move(id));
}

Eigen::Index WalkMatrix::rows() const {
    return std::visit([](const auto& m) { return m.rows(); }, rep_);
}

double WalkMatrix::coeff(Eigen::Index i, Eigen::Index j) const {
    return std::visit([&](const auto& m) { return m.coeff(i, j); }, rep_);
}

double WalkMatrix::min_coeff() const {
    if (const auto* d = std::get_if<Eigen::MatrixXd>(&rep_)) return d->minCoeff();
    const auto& s = std::get<SparseRowMajor>(rep_);
    double mn = 0.0;
    for (int k = 0; k < s.outerSize(); ++k)
        for (SparseRowMajor::InnerIterator it(s, k); it; ++it) mn = std::min(mn, it.value());
    return mn;
}

Eigen::VectorXd WalkMatrix::row_sums() const {
    if (const auto* d = std::get_if<Eigen::MatrixXd>(&rep_)) return d->rowwise().sum();
    const auto& s = std::get<SparseRowMajor>(rep_);
    Eigen::VectorXd out = Eigen::VectorXd::Zero(s.rows());
    for (int k = 0; k < s.outerSize(); ++k)
        for (SparseRowMajor::InnerIterator it(s, k); it; ++it) out[it.row()] += it.value();
    return out;
}

Eigen::VectorXd WalkMatrix::diagonal() const {
    if (const auto* d = std::get_if<Eigen::MatrixXd>(&rep_)) return d->diagonal();
    const auto& s = std::get<SparseRowMajor>(rep_);
    Eigen::VectorXd out = Eigen::VectorXd::Zero(s.rows());
    for (Eigen::Index i = 0; i < s.rows(); ++i) out[i] = s.coeff(i, i);
    return out;
}

Eigen::VectorXd WalkMatrix::apply(const Eigen::VectorXd& v) const {
    return std::visit([&](const auto& m) -> Eigen::VectorXd { return m * v; }, rep_);
}

Eigen::MatrixXd WalkMatrix::apply(const Eigen::MatrixXd& m) const {
    return std::visit([&](const auto& a) -> Eigen::MatrixXd { return a * m; }, rep_);
}

void WalkMatrix::for_each_entry(
    const std::function<void(Eigen::Index, Eigen::Index, double)>& fn) const {
    if (const auto* d = std::get_if<Eigen::MatrixXd>(&rep_)) {
        for (Eigen::Index i = 0; i < d->rows(); ++i)
            for (Eigen::Index j = 0; j < d->cols(); ++j)
                if ((*d)(i, j) != 0.0) fn(i, j, (*d)(i, j));
        return;
    }
    const auto& s = std::get<SparseRowMajor>(rep_);
    for (int k = 0; k < s.outerSize(); ++k)
        for (SparseRowMajor::InnerIterator it(s, k); it; ++it) fn(it.row(), it.col(), it.value());
}

void WalkMatrix::for_each_in_row(Eigen::Index row,
                                 const std::function<void(Eigen::Index, double)>& fn) const {
    if (const auto* d = std::get_if<Eigen::MatrixXd>(&rep_)) {
        for (Eigen::Index j = 0; j < d->cols(); ++j)
            if ((*d)(row, j) != 0.0) fn(j, (*d)(row, j));
        return;
    }
    const auto& s = std::get<SparseRowMajor>(rep_);
    for (SparseRowMajor::InnerIterator it(s, static_cast<int>(row)); it; ++it)
        fn(it.col(), it.value());
}

Eigen::MatrixXd WalkMatrix::dense() const {
    if (const auto* d = std::get_if<Eigen::MatrixXd>(&rep_)) return *d;
    return Eigen::MatrixXd(std::get<SparseRowMajor>(rep_));
}

double WalkMatrix::max_abs_diff(const WalkMatrix& other) const {
    const Eigen::Index n = rows();
    double mx = 0.0;
    // union of supports: scan both
    for_each_entry([&](Eigen::Index i, Eigen::Index j, double v) {
        mx = std::max(mx, std::abs(v - other.coeff(i, j)));
    });
    other.for_each_entry([&](Eigen::Index i, Eigen::Index j, double v) {
        mx = std::max(mx, std::abs(v - coeff(i, j)));
    });
    (void)n;
    return mx;
}

double WalkMatrix::clamp_negatives(double tol) {
    double worst = 0.0;
    if (auto* d = std::get_if<Eigen::MatrixXd>(&rep_)) {
        for (Eigen::Index i = 0; i < d->rows(); ++i)
            for (Eigen::Index j = 0; j < d->cols(); ++j) {
                double& v = (*d)(i, j);
                if (v < 0.0) {
                    worst = std::min(worst, v);
                    if (v >= -tol) v = 0.0;
                }
            }
        return worst;
    }
    auto& s = std::get<SparseRowMajor>(rep_);
    for (int k = 0; k < s.outerSize(); ++k)
        for (SparseRowMajor::InnerIterator it(s, k); it; ++it) {
            if (it.value() < 0.0) {
                worst = std::min(worst, it.value());
                if (it.value() >= -tol) it.valueRef() = 0.0;
            }
        }
    return worst;
}

double WalkMatrix::self_adjointness_gap(const Eigen::VectorXd& pi) const {
    double mx = 0.0;
    for_each_entry([&](Eigen::Index i, Eigen::Index j, double v) {
        mx = std::max(mx, std::abs(pi[i] * v - pi[j] * coeff(j, i)));
    });
    return mx;
}

WalkMatrix WalkMatrix::scaled(double a) const {
    if (const auto* d = std::get_if<Eigen::MatrixXd>(&rep_)) return WalkMatrix(Eigen::MatrixXd(a * (*d)));
    return WalkMatrix(SparseRowMajor(a * std::get<SparseRowMajor>(rep_)));
}

WalkMatrix WalkMatrix::plus(const WalkMatrix& other, double coeff) const {
    if (is_sparse() && other.is_sparse()) {
        SparseRowMajor out = std::get<SparseRowMajor>(rep_) +
                             SparseRowMajor(coeff * std::get<SparseRowMajor>(other.rep_));
        return WalkMatrix(std::move(out));
    }
    return WalkMatrix(Eigen::MatrixXd(dense() + coeff * other.dense()));
}

WalkMatrix pack_walk_matrix(SparseRowMajor m) {
    m.prune(0.0);
    m.makeCompressed();
    const double fill = static_cast<double>(m.nonZeros()) /
                        (static_cast<double>(m.rows()) * static_cast<double>(m.cols()));
    if (fill >= 0.25 && m.rows() <= 4000) return WalkMatrix(Eigen::MatrixXd(m));
    return WalkMatrix(std::move(m));
}

} // namespace hdx
