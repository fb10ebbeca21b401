#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hdx/decomposition.hpp"
#include "hdx/walks.hpp"

namespace hdx {

/// Product-formula eigenvalue of a pure walk at level k on the level-ell
/// space; down_positions are the 1-indexed positions of the down steps.
double pure_walk_lambda(int k, const std::vector<int>& down_positions, int ell);

/// Predicted strip centers lambda_0..lambda_k. Swap walks use the closed form
/// C(k-j,ell)/C(k,ell); affine combinations sum their terms' product formulas.
Eigen::VectorXd walk_lambdas(const HDWalk& m);

/// c_i = max over a Pi-orthonormal basis of V_k^i of ||M f - lambda_i f||/||f||.
Eigen::VectorXd measured_residuals(const HDWalk& m, const LiftedBases& bases);

struct StripInfo {
    double lambda = 0.0;
    int count = 0;
    double min_eig = 0.0;
    double max_eig = 0.0;
};

struct StripReport {
    Eigen::VectorXd lambdas;
    Eigen::VectorXd residuals;
    Eigen::VectorXd spectrum;       // ascending
    std::vector<int> assignment;    // eigenvalue -> strip index
    double max_deviation = 0.0;
    double bound_zhang = 0.0;       // sqrt(k+1) * c_max
    double bound_ko = 0.0;          // (#strips) * lambda_ratio * sqrt(c_max)
    bool pass = false;              // max_deviation <= bound_zhang
    std::vector<StripInfo> strips;
    std::vector<std::vector<int>> merged_groups; // strips closer than 2*bound_zhang
    bool merged = false;

    std::string to_json() const;
};

StripReport stripping_report(const HDWalk& m);

/// Nearest-strip assignment of each eigenvalue; exact distance ties go to the
/// lower strip index (tolerance 1e-9).
std::vector<int> assign_strips(const Eigen::VectorXd& spectrum, const Eigen::VectorXd& lambdas);

struct STRank {
    int rank_predicted = 0; // #{i : lambda_i > delta}
    int rank_empirical = 0; // #strips whose assigned true eigenvalues exceed delta
};

STRank st_rank(const HDWalk& m, double delta);

/// Predicted rank alone; no eigensolve.
int st_rank_predicted(const HDWalk& m, double delta);

struct MonotonicityResult {
    bool monotone = true;
    std::vector<int> violations; // indices i with lambda_i < lambda_{i+1}
};

MonotonicityResult monotonicity_check(const HDWalk& m);

} // namespace hdx
