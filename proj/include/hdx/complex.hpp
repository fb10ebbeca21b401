#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hdx/error.hpp"
#include "hdx/face.hpp"

namespace hdx {

/// A weighted pure simplicial complex: all levels X(0..d) in lexicographic
/// face order, with per-level distributions Pi_i induced from the top level by
/// downward closure. Immutable after construction.
class Complex {
public:
    static Complex from_top_faces(std::vector<Face> top_faces,
                                  std::optional<Eigen::VectorXd> top_weights = std::nullopt);

    int dimension() const { return dim_; }
    int vertex_count() const { return n_; }

    const std::vector<Face>& faces(int level) const;
    std::size_t level_size(int level) const { return faces(level).size(); }
    const Eigen::VectorXd& weights(int level) const;

    /// Index of a face in its level's lexicographic order, if present.
    std::optional<std::size_t> index_of(int level, const Face& f) const;
    bool has_face(const Face& f) const;

    /// True when the top level is all of C([n], d) with uniform weights.
    bool is_complete() const;

    /// Weighted inner product on C_level.
    double inner(int level, const Eigen::VectorXd& a, const Eigen::VectorXd& b) const;
    double norm(int level, const Eigen::VectorXd& a) const;

private:
    Complex() = default;

    int n_ = 0;
    int dim_ = 0;
    std::vector<std::vector<Face>> levels_;
    std::vector<Eigen::VectorXd> pi_;
};

using ComplexPtr = std::shared_ptr<const Complex>;

Complex build_complex(std::vector<Face> top_faces,
                      std::optional<Eigen::VectorXd> top_weights = std::nullopt);

Complex complete_complex(int n, int d);

/// All 3-subsets of [n] except {1,2,3}, uniform weights.
Complex punctured_complete_complex(int n);

/// Keeps each d-subset of [n] independently with probability p, resampling
/// until every link at levels 0..d-2 has a connected skeleton.
Complex sparsified_complex(int n, int d, double p, std::uint64_t seed);

struct Link {
    Face tau;
    Complex complex;
};

Link link(const Complex& cx, const Face& tau);

/// The k-faces containing tau, with their Pi_k masses.
std::vector<std::pair<Face, double>> link_faces(const Complex& cx, const Face& tau, int k);

std::string complex_to_json(const Complex& cx);
Complex complex_from_json(const std::string& text);
void save_complex(const Complex& cx, const std::filesystem::path& path);
Complex load_complex(const std::filesystem::path& path);

} // namespace hdx
