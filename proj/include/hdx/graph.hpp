#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hdx/complex.hpp"
#include "hdx/face.hpp"

namespace hdx {

/// Undirected weighted graph with a stationary vertex measure. Self-loops
/// allowed on the diagonal.
struct WeightedGraph {
    std::vector<Face> vertices;
    Eigen::MatrixXd weights;        // symmetric
    Eigen::VectorXd vertex_measure; // proportional to row sums
};

bool is_connected(const WeightedGraph& g);

/// The 1-skeleton (X(1), X(2)) with Pi_2 edge weights.
WeightedGraph skeleton_graph(const Complex& cx);

struct SpectralGapResult {
    double lambda2 = 0.0; // max |non-trivial eigenvalue| of the normalized walk
    bool disconnected = false;
};

SpectralGapResult second_eigenvalue(const WeightedGraph& g);

struct LinkSpectralRecord {
    Face face;
    int level = 0;
    double lambda2 = 0.0;
    bool disconnected = false;
};

struct GammaReport {
    double gamma = 0.0;
    Face argmax_face;
    std::vector<LinkSpectralRecord> links;

    std::string to_json() const;
};

/// Two-sided local-spectral expansion: max skeleton lambda2 over links of all
/// faces at levels 0..d-2 (the empty face included).
GammaReport gamma(const Complex& cx);

} // namespace hdx
