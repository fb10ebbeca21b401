#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "hdx/complex.hpp"
#include "hdx/graph.hpp"
#include "hdx/walk_matrix.hpp"

namespace hdx {

enum class Step : std::uint8_t { Up, Down };
using Word = std::vector<Step>;

Word word_from_string(const std::string& s);
std::string word_to_string(const Word& w);

/// Row-stochastic averaging operator between adjacent levels.
struct LevelOperator {
    int source_level = 0;
    int target_level = 0;
    SparseRowMajor matrix;
};

LevelOperator up_operator(const Complex& cx, int k);    // C_k -> C_{k+1}
LevelOperator down_operator(const Complex& cx, int k);  // C_k -> C_{k-1}

/// U^k_i = U_{k-1} ... U_i and D^k_i = D_{i+1} ... D_k as materialized matrices.
SparseRowMajor up_composed(const Complex& cx, int k, int i);
SparseRowMajor down_composed(const Complex& cx, int k, int i);

std::vector<int> down_positions_of(const Word& w);

struct PureWalk {
    int level = 0;
    Word word;
    std::vector<int> down_positions; // 1-indexed positions of Down in the word
    WalkMatrix matrix;

    int height() const { return static_cast<int>(down_positions.size()); }
};

PureWalk pure_walk(const Complex& cx, int k, const Word& word);

struct WalkTerm {
    double coeff = 0.0;
    Word word;
    std::vector<int> down_positions;
};

/// An affine combination of pure walks at level k, materialized. Row-stochastic,
/// non-negative, self-adjoint w.r.t. Pi_k (swap_walk_direct may carry a small
/// recorded asymmetry on non-complete complexes).
class HDWalk {
public:
    HDWalk(ComplexPtr cx, int level, std::vector<WalkTerm> terms, WalkMatrix matrix,
           bool is_complete, std::optional<std::pair<int, int>> swap_params = std::nullopt);

    const Complex& complex() const { return *complex_; }
    const ComplexPtr& complex_ptr() const { return complex_; }
    int level() const { return level_; }
    const std::vector<WalkTerm>& terms() const { return terms_; }
    const WalkMatrix& matrix() const { return matrix_; }
    double weight() const { return weight_; }
    int height() const { return height_; }
    bool is_complete() const { return is_complete_; }
    const std::optional<std::pair<int, int>>& swap_params() const { return swap_params_; }
    double self_adjointness_gap() const { return self_adjoint_gap_; }
    const Eigen::VectorXd& stationary() const;
    std::string description() const { return description_; }
    void set_description(std::string d) { description_ = std::move(d); }

    /// True spectrum (ascending) of the Pi-symmetrized matrix; cached.
    const Eigen::VectorXd& spectrum() const;

private:
    ComplexPtr complex_;
    int level_;
    std::vector<WalkTerm> terms_;
    WalkMatrix matrix_;
    double weight_ = 0.0;
    int height_ = 0;
    bool is_complete_ = false;
    std::optional<std::pair<int, int>> swap_params_;
    double self_adjoint_gap_ = 0.0;
    std::string description_;
    mutable std::optional<Eigen::VectorXd> spectrum_;

    friend HDWalk swap_walk_direct(const ComplexPtr&, int, int);
};

HDWalk hd_walk(const ComplexPtr& cx, int k, const std::vector<std::pair<double, Word>>& terms,
               bool declared_complete = false);

HDWalk identity_walk(const ComplexPtr& cx, int k);

/// N^j_k = D^{k+j}_k U^{k+j}_k.
HDWalk canonical_walk(const ComplexPtr& cx, int k, int j);

/// (U_{k-1} D_k)^t.
HDWalk lower_walk_power(const ComplexPtr& cx, int k, int t);

/// Restriction of N^j_k to pairs of intersection k-j, rows renormalized.
HDWalk swap_walk_direct(const ComplexPtr& cx, int k, int j);

/// Alternating hypergeometric combination of canonical walks.
HDWalk swap_walk_ajt(const ComplexPtr& cx, int k, int j);

/// Uniform walk on k-sets at intersection k-j of a complete complex; valid for
/// any j <= k <= d.
HDWalk johnson_swap_walk(const ComplexPtr& cx, int k, int j);

/// S^j_k via the hypergeometric combination when k+j <= d, else (complete
/// complexes only) the Johnson-graph construction.
HDWalk swap_walk(const ComplexPtr& cx, int k, int j);

/// The weighted graph carrying the walk: W(s,t) = Pi_k(s) M(s,t).
WeightedGraph walk_graph(const HDWalk& m);

/// E_{Pi_k}[M(v,v)].
double laziness(const HDWalk& m);

/// Walk DSL: "N:k:j", "S:k:j", "UD^t:k", "I:k", "combo:k:[[alpha,\"UD..\"],...]".
HDWalk parse_walk_spec(const ComplexPtr& cx, const std::string& spec);

} // namespace hdx
