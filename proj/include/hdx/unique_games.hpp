#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hdx/walks.hpp"

namespace hdx {

/// Affine unique game over the weighted graph of an HD-walk: constraints
/// X_u - X_v = shift(u,v) (mod m) on the walk's positive-weight edges.
class AffineUGInstance {
public:
    AffineUGInstance(HDWalk walk, int alphabet_size);

    const HDWalk& walk() const { return walk_; }
    const Complex& complex() const { return walk_.complex(); }
    int level() const { return walk_.level(); }
    int alphabet_size() const { return m_; }
    Eigen::Index vertex_count() const { return walk_.matrix().rows(); }

    /// Unordered edges (u <= v) with positive weight; weight of {u,v} counts
    /// both orientations, a self-loop counts once.
    struct Edge {
        Eigen::Index u = 0;
        Eigen::Index v = 0;
        double weight = 0.0; // total probability mass of the edge
        int shift = 0;       // X_u - X_v (mod m)
    };

    const std::vector<Edge>& edges() const { return edges_; }
    std::vector<Edge>& edges() { return edges_; }
    const std::vector<std::vector<std::pair<Eigen::Index, int>>>& adjacency() const {
        return adj_;
    }
    double edge_weight_between(Eigen::Index u, Eigen::Index v) const;

    void rebuild_adjacency();

private:
    HDWalk walk_;
    int m_ = 1;
    std::vector<Edge> edges_;
    // adj_[u] lists (edge index, +1/-1 orientation sign) pairs
    std::vector<std::vector<std::pair<Eigen::Index, int>>> adj_;
};

using Assignment = std::vector<int>;
using PartialAssignment = std::vector<std::optional<int>>;

struct PlantedInstance {
    AffineUGInstance instance;
    Assignment ground_truth;
    double corrupted_weight = 0.0;
};

/// Ground-truth consistent shifts, then re-randomized shifts on a seeded edge
/// subset of total weight at most eps.
PlantedInstance plant_instance(HDWalk walk, int m, double eps, std::uint64_t seed);

double value(const AffineUGInstance& inst, const Assignment& x);

/// Weighted satisfied fraction among edges with both endpoints assigned,
/// normalized by their weight. Zero when no such edge exists.
double restricted_value(const AffineUGInstance& inst, const PartialAssignment& x);

Assignment random_baseline(const AffineUGInstance& inst, std::uint64_t seed);

/// Maximum-weight spanning tree propagation per component of the induced
/// subgraph, then bounded best-response sweeps inside the subset.
PartialAssignment propagation_solve(const AffineUGInstance& inst,
                                    const std::vector<Eigen::Index>& subset);

struct RoundingRound {
    Face link;
    int newly_assigned = 0;
    double internal_weight = 0.0;
    double internal_satisfied = 0.0;
};

struct RoundingResult {
    Assignment assignment;
    double value = 0.0;
    double baseline_value = 0.0;
    int r = 0;
    std::vector<RoundingRound> rounds;
    double first_round_satisfied = 0.0; // satisfied internal weight of first commit
    std::string to_json() const;
};

/// Iterated link rounding: repeatedly solve the instance restricted to the
/// unassigned part of the best-scoring r-link, align each solved component's
/// global shift with already-committed neighbors, and commit.
RoundingResult iterated_link_rounding(const AffineUGInstance& inst, double eps,
                                      std::uint64_t seed, std::optional<int> r_override = std::nullopt);

struct FallbackDecision {
    double laziness = 0.0;
    double spectral_gap = 0.0;
    double gap_threshold = 0.0;
    bool expander_route = false;
    std::string to_json() const;
};

/// Laziness/spectral-gap screen: walks that are lazy or have a large gap can
/// be handed to expander-style solvers instead of link rounding.
FallbackDecision expander_fallback_check(const HDWalk& m, double gap_threshold_scale = 0.1);

void save_instance(const AffineUGInstance& inst, const std::filesystem::path& path);
std::string instance_to_json(const AffineUGInstance& inst);

} // namespace hdx
