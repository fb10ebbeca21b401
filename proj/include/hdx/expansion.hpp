#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hdx/decomposition.hpp"
#include "hdx/walks.hpp"

namespace hdx {

/// 0/1 indicator over X(k) in canonical face order.
Eigen::VectorXd indicator(const Complex& cx, int k, const std::vector<Face>& faces);

/// Indicator of the k-faces containing tau.
Eigen::VectorXd link_indicator(const Complex& cx, int k, const Face& tau);

struct ExpansionRecord {
    double alpha = 0.0;          // E[1_S]
    double phi = 0.0;            // definitional expansion
    double phi_quadratic = 0.0;  // 1 - <1_S, M 1_S>/alpha
    std::string to_json() const;
};

ExpansionRecord expansion(const HDWalk& m, const Eigen::VectorXd& ind);

/// D^k_i f, the local expectation of f over i-links.
Eigen::VectorXd local_expectation(const Complex& cx, int k, const Eigen::VectorXd& f, int i);

/// eps_i = Var(D^k_i 1_S) / E[1_S] for i = 1..r.
Eigen::VectorXd ell2_profile(const Complex& cx, int k, const Eigen::VectorXd& ind, int r);

/// eps_i = ||D^k_i f - E[f]||_inf for i = 1..r.
Eigen::VectorXd ellinf_profile(const Complex& cx, int k, const Eigen::VectorXd& f, int r);

/// |Var(D^k_ell f) - sum_{j=1..ell} (C(ell,j)/C(k,j)) <f,f_j>| / <f,f>.
double variance_identity_check(const Complex& cx, int k, const Eigen::VectorXd& f, int ell);
double variance_identity_check(const Complex& cx, int k, const Eigen::VectorXd& f, int ell,
                               const LevelSetDecomposition& dec);

struct ProjectionBound {
    double lhs = 0.0;       // <f, f_i>
    double rhs_c0 = 0.0;    // C(k,i) eps_i |E[f]|
    double slack_c0 = 0.0;  // rhs_c0 - lhs
    double required_c = 0.0; // c making the bound tight, in units of gamma*<f,f>
};

ProjectionBound projection_bound_check(const Complex& cx, int k, const Eigen::VectorXd& ind,
                                       int i, double gamma_value);

struct LinkExpansionEntry {
    Face face;
    int level = 0;
    double phi = 0.0;
    double alpha = 0.0;
};

struct LinkExpansionProfile {
    std::vector<LinkExpansionEntry> entries;
    Eigen::VectorXd lambdas;
    Eigen::VectorXd max_abs_error; // per level: max |phi - (1 - lambda_i)|
    bool dimension_equals_level = false;
    std::string to_json() const;
    std::string to_csv() const;
};

LinkExpansionProfile link_expansion_profile(const HDWalk& m);

struct ExpansionBound {
    double delta = 0.0;
    int r = 0;
    double alpha = 0.0;
    double bound_c0 = 0.0;       // gamma term dropped
    double bound_with_c = 0.0;   // c * gamma subtracted (NaN when gamma unknown)
    Eigen::VectorXd epsilons;
    double measured_phi = 0.0;
};

/// Certified lower bound on phi(S) for complete walks:
/// 1 - alpha - (1-alpha) delta - c gamma - sum_{i=1..r} (lambda_i - delta) C(k,i) eps_i.
ExpansionBound expansion_lower_bound(const HDWalk& m, const Eigen::VectorXd& ind, double delta,
                                     std::optional<double> gamma_value = std::nullopt,
                                     double c_constant = 1.0);

struct BmFixture {
    std::vector<Face> set;
    Eigen::VectorXd ind;
    double exact_phi = 0.0;    // 1 - C(n/m-k, k-t)/C(n-k, k-t)
    double measured_phi = 0.0;
    Eigen::VectorXd eps_measured;
    Eigen::VectorXd eps_formula; // C(n/m-i, k-i)/C(n-i, k-i)
};

/// The set B_m of all k-faces inside the first n/m vertices of a complete
/// complex, measured against S^{k-t}_k.
BmFixture tightness_fixture_Bm(const ComplexPtr& cx, int m, int k, int t);

struct LinkSearchLevel {
    int level = 0;
    Face best_face;
    double local_density = 0.0;
    double excess = 0.0; // local density minus alpha
};

struct LinkSearchResult {
    double alpha = 0.0;
    int max_level = 0; // R_{delta/2}(M) cap
    std::vector<LinkSearchLevel> levels;
};

LinkSearchResult nonexpansion_link_search(const HDWalk& m, const Eigen::VectorXd& ind,
                                          double delta);

struct VertexDeviation {
    double mean_abs = 0.0;
    double max_abs = 0.0;
    double phi_link = 0.0;
};

/// Spread of the per-vertex expansion phi_{X_tau}(v) around the link's
/// expansion, weighted by the stationary measure restricted to the link.
VertexDeviation vertex_expansion_deviation(const HDWalk& m, const Face& tau);

} // namespace hdx
