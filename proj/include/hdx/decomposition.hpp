#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hdx/complex.hpp"

namespace hdx {

/// Pi_i-orthonormal basis of H^i = Ker(D_i) (H^0 = C_0), columns.
struct KernelBasis {
    int level = 0;
    Eigen::MatrixXd vectors;

    int dim() const { return static_cast<int>(vectors.cols()); }
};

KernelBasis kernel_basis(const Complex& cx, int i);

/// Kernel bases for levels 0..k lifted to C_k by U^k_i; shared across repeated
/// decompositions of the same complex/level.
struct LiftedBases {
    int k = 0;
    std::vector<Eigen::MatrixXd> kernel;   // level-i kernel basis, Pi_i-orthonormal
    std::vector<Eigen::MatrixXd> lifted;   // U^k_i applied to kernel[i]
    std::vector<int> dims;

    int total_dim() const;
};

LiftedBases lifted_bases(const Complex& cx, int k);

struct LevelSetDecomposition {
    int k = 0;
    std::vector<Eigen::VectorXd> components; // f_i on X(k)
    std::vector<Eigen::VectorXd> lifts;      // g_i on X(i), f_i = U^k_i g_i
    double residual = 0.0;                   // ||f - sum f_i|| / ||f||
};

LevelSetDecomposition decompose(const Complex& cx, int k, const Eigen::VectorXd& f);
LevelSetDecomposition decompose(const Complex& cx, const LiftedBases& bases,
                                const Eigen::VectorXd& f);

/// Gram matrix of the components plus the mass each component carries on the
/// other levels' spaces. The latter is the operative non-orthogonality
/// measure: a component can be non-orthogonal to another level's space even
/// when the pairwise component inner products vanish.
struct OrthogonalityReport {
    Eigen::MatrixXd gram;          // <f_i, f_j>
    Eigen::MatrixXd space_overlap; // ||P_{V^j} f_i||^2
    double norm_f = 0.0;           // <f, f>
    double max_cross_gram = 0.0;   // max_{i != j} |gram_ij| / <f,f>
    double max_cross_overlap = 0.0;

    std::string to_json() const;
};

OrthogonalityReport orthogonality_report(const Complex& cx, const LiftedBases& bases,
                                         const LevelSetDecomposition& dec);
OrthogonalityReport orthogonality_report(const Complex& cx, const LevelSetDecomposition& dec);

/// C(k,i) ||U^k_i g||^2 / ||g||^2 for g in Ker(D_i).
double norm_ratio(const Complex& cx, int k, int i, const Eigen::VectorXd& g);

std::string decomposition_to_json(const Complex& cx, const LevelSetDecomposition& dec);

} // namespace hdx
