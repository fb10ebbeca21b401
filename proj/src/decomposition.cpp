#include "hdx/decomposition.hpp"

#include <cmath>

#include <Eigen/QR>
#include <Eigen/SVD>
#include <nlohmann/json.hpp>

#include "hdx/error.hpp"
#include "hdx/walks.hpp"

namespace hdx {

namespace {

constexpr double kRankCutoff = 1e-10;

// Pi-orthonormalizes the columns of b (Gram-Schmidt via Cholesky of the
// weighted Gram matrix).
Eigen::MatrixXd pi_orthonormalize(const Eigen::MatrixXd& b, const Eigen::VectorXd& pi) {
    Eigen::MatrixXd g = b.transpose() * pi.asDiagonal() * b;
    Eigen::LLT<Eigen::MatrixXd> llt(g);
    if (llt.info() != Eigen::Success)
        fail(ErrorKind::DecompositionDegenerate, "basis Gram matrix not positive definite");
    return llt.matrixL().solve(b.transpose()).transpose();
}

} // namespace

KernelBasis kernel_basis(const Complex& cx, int i) {
    if (i < 0 || i > cx.dimension())
        fail(ErrorKind::MalformedInput, "level out of range: " + std::to_string(i));
    if (i == 0) {
        return {0, Eigen::MatrixXd::Ones(1, 1)};
    }
    Eigen::MatrixXd d = Eigen::MatrixXd(down_operator(cx, i).matrix);
    Eigen::BDCSVD<Eigen::MatrixXd> svd(d, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double cutoff = sv.size() ? sv[0] * kRankCutoff : 0.0;
    Eigen::Index rank = 0;
    while (rank < sv.size() && sv[rank] > cutoff) ++rank;
    const Eigen::Index dim = d.cols() - rank;
    if (dim == 0) return {i, Eigen::MatrixXd::Zero(d.cols(), 0)};
    Eigen::MatrixXd null = svd.matrixV().rightCols(dim);
    return {i, pi_orthonormalize(null, cx.weights(i))};
}

int LiftedBases::total_dim() const {
    int t = 0;
    for (int d : dims) t += d;
    return t;
}

LiftedBases lifted_bases(const Complex& cx, int k) {
    if (k < 0 || k > cx.dimension())
        fail(ErrorKind::MalformedInput, "level out of range: " + std::to_string(k));
    LiftedBases out;
    out.k = k;
    for (int i = 0; i <= k; ++i) {
        KernelBasis kb = kernel_basis(cx, i);
        SparseRowMajor lift = up_composed(cx, k, i);
        out.lifted.push_back(lift * kb.vectors);
        out.kernel.push_back(std::move(kb.vectors));
        out.dims.push_back(static_cast<int>(out.kernel.back().cols()));
    }
    return out;
}

LevelSetDecomposition decompose(const Complex& cx, const LiftedBases& bases,
                                const Eigen::VectorXd& f) {
    const int k = bases.k;
    const Eigen::Index nk = static_cast<Eigen::Index>(cx.level_size(k));
    if (f.size() != nk)
        fail(ErrorKind::MalformedInput, "function length does not match |X(k)|");
    const int total = bases.total_dim();
    if (total != static_cast<int>(nk))
        fail(ErrorKind::DecompositionDegenerate,
             "sum of kernel dimensions " + std::to_string(total) + " != |X(k)| = " +
                 std::to_string(nk));

    Eigen::MatrixXd stacked(nk, total);
    int off = 0;
    for (int i = 0; i <= k; ++i) {
        stacked.middleCols(off, bases.dims[i]) = bases.lifted[i];
        off += bases.dims[i];
    }
    const Eigen::VectorXd sq = cx.weights(k).array().sqrt();
    Eigen::MatrixXd a = sq.asDiagonal() * stacked;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
    qr.setThreshold(kRankCutoff);
    if (qr.rank() < total)
        fail(ErrorKind::DecompositionDegenerate,
             "stacked lift system is rank deficient: rank " + std::to_string(qr.rank()) +
                 " of " + std::to_string(total));
    Eigen::VectorXd coeff = qr.solve((sq.array() * f.array()).matrix());

    LevelSetDecomposition dec;
    dec.k = k;
    off = 0;
    Eigen::VectorXd recon = Eigen::VectorXd::Zero(nk);
    for (int i = 0; i <= k; ++i) {
        const Eigen::VectorXd ci = coeff.segment(off, bases.dims[i]);
        dec.lifts.push_back(bases.kernel[i] * ci);
        dec.components.push_back(bases.lifted[i] * ci);
        recon += dec.components.back();
        off += bases.dims[i];
    }
    const double fn = cx.norm(k, f);
    dec.residual = fn > 0 ? cx.norm(k, f - recon) / fn : 0.0;
    return dec;
}

LevelSetDecomposition decompose(const Complex& cx, int k, const Eigen::VectorXd& f) {
    return decompose(cx, lifted_bases(cx, k), f);
}

OrthogonalityReport orthogonality_report(const Complex& cx, const LiftedBases& bases,
                                         const LevelSetDecomposition& dec) {
    const int k = dec.k;
    OrthogonalityReport rep;
    rep.gram = Eigen::MatrixXd::Zero(k + 1, k + 1);
    rep.space_overlap = Eigen::MatrixXd::Zero(k + 1, k + 1);
    Eigen::VectorXd f = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(cx.level_size(k)));
    for (const auto& c : dec.components) f += c;
    rep.norm_f = cx.inner(k, f, f);

    const Eigen::VectorXd& pi = cx.weights(k);
    std::vector<Eigen::MatrixXd> ortho;
    ortho.reserve(static_cast<std::size_t>(k + 1));
    for (int i = 0; i <= k; ++i)
        ortho.push_back(bases.dims[i] > 0
                            ? pi_orthonormalize(bases.lifted[i], pi)
                            : Eigen::MatrixXd::Zero(pi.size(), 0));

    for (int i = 0; i <= k; ++i) {
        for (int j = 0; j <= k; ++j) {
            rep.gram(i, j) = cx.inner(k, dec.components[i], dec.components[j]);
            const Eigen::VectorXd proj =
                ortho[j].transpose() * (pi.asDiagonal() * dec.components[i]);
            rep.space_overlap(i, j) = proj.squaredNorm();
            if (i != j && rep.norm_f > 0) {
                rep.max_cross_gram =
                    std::max(rep.max_cross_gram, std::abs(rep.gram(i, j)) / rep.norm_f);
                rep.max_cross_overlap =
                    std::max(rep.max_cross_overlap, rep.space_overlap(i, j) / rep.norm_f);
            }
        }
    }
    return rep;
}

OrthogonalityReport orthogonality_report(const Complex& cx, const LevelSetDecomposition& dec) {
    return orthogonality_report(cx, lifted_bases(cx, dec.k), dec);
}

double norm_ratio(const Complex& cx, int k, int i, const Eigen::VectorXd& g) {
    if (i < 0 || i > k || k > cx.dimension())
        fail(ErrorKind::MalformedInput, "norm_ratio needs 0 <= i <= k <= d");
    const double gn = cx.norm(i, g);
    if (gn == 0.0) fail(ErrorKind::MalformedInput, "zero function");
    if (i >= 1) {
        const Eigen::VectorXd dg = down_operator(cx, i).matrix * g;
        if (cx.norm(i - 1, dg) > 1e-6 * gn)
            fail(ErrorKind::MalformedInput, "g is not in Ker(D_i)");
    }
    const Eigen::VectorXd lifted = up_composed(cx, k, i) * g;
    return binomial(k, i) * cx.inner(k, lifted, lifted) / (gn * gn);
}

std::string decomposition_to_json(const Complex& cx, const LevelSetDecomposition& dec) {
    nlohmann::json j;
    j["k"] = dec.k;
    j["residual"] = dec.residual;
    std::vector<double> norms;
    for (const auto& c : dec.components) norms.push_back(cx.inner(dec.k, c, c));
    j["component_norms"] = norms;
    auto rep = orthogonality_report(cx, dec);
    std::vector<std::vector<double>> gram;
    for (int r = 0; r <= dec.k; ++r) {
        std::vector<double> row;
        for (int c = 0; c <= dec.k; ++c) row.push_back(rep.gram(r, c));
        gram.push_back(std::move(row));
    }
    j["gram"] = gram;
    return j.dump(2);
}

std::string OrthogonalityReport::to_json() const {
    nlohmann::json j;
    auto mat = [](const Eigen::MatrixXd& m) {
        std::vector<std::vector<double>> out;
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            std::vector<double> row;
            for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
            out.push_back(std::move(row));
        }
        return out;
    };
    j["gram"] = mat(gram);
    j["space_overlap"] = mat(space_overlap);
    j["norm_f"] = norm_f;
    j["max_cross_gram"] = max_cross_gram;
    j["max_cross_overlap"] = max_cross_overlap;
    return j.dump(2);
}

} // namespace hdx
