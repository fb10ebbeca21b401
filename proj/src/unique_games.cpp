#include "hdx/unique_games.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <queue>
#include <random>
#include <tuple>

#include <nlohmann/json.hpp>

#include "hdx/error.hpp"
#include "hdx/expansion.hpp"
#include "hdx/strips.hpp"

namespace hdx {

namespace {

int mod(int a, int m) {
    const int r = a % m;
    return r < 0 ? r + m : r;
}

// Platform-independent bounded draw (std distributions are not portable).
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(rng()) * static_cast<unsigned __int128>(n)) >> 64);
}

// Distinct streams for planting, baselines, and leftover fills; a shared
// stream would make the baseline replay the planted truth.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag) {
    std::uint64_t z = seed + tag * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

template <typename T>
void seeded_shuffle(std::vector<T>& v, std::mt19937_64& rng) {
    for (std::size_t i = v.size(); i > 1; --i)
        std::swap(v[i - 1], v[static_cast<std::size_t>(bounded(rng, i))]);
}

} // namespace

AffineUGInstance::AffineUGInstance(HDWalk walk, int alphabet_size)
    : walk_(std::move(walk)), m_(alphabet_size) {
    if (m_ < 1) fail(ErrorKind::MalformedInput, "alphabet size must be >= 1");
    const Eigen::VectorXd& pi = walk_.stationary();
    walk_.matrix().for_each_entry([&](Eigen::Index u, Eigen::Index v, double p) {
        if (u > v || p <= 0.0) return;
        const double w = (u == v) ? pi[u] * p : pi[u] * p + pi[v] * walk_.matrix().coeff(v, u);
        edges_.push_back({u, v, w, 0});
    });
    rebuild_adjacency();
}

void AffineUGInstance::rebuild_adjacency() {
    adj_.assign(static_cast<std::size_t>(vertex_count()), {});
    for (std::size_t e = 0; e < edges_.size(); ++e) {
        const auto& ed = edges_[e];
        adj_[static_cast<std::size_t>(ed.u)].emplace_back(static_cast<Eigen::Index>(e), +1);
        if (ed.u != ed.v)
            adj_[static_cast<std::size_t>(ed.v)].emplace_back(static_cast<Eigen::Index>(e), -1);
    }
}

double AffineUGInstance::edge_weight_between(Eigen::Index u, Eigen::Index v) const {
    for (const auto& [ei, sign] : adj_[static_cast<std::size_t>(u)]) {
        const auto& ed = edges_[static_cast<std::size_t>(ei)];
        if ((sign > 0 ? ed.v : ed.u) == v) return ed.weight;
    }
    return 0.0;
}

PlantedInstance plant_instance(HDWalk walk, int m, double eps, std::uint64_t seed) {
    if (m < 1) fail(ErrorKind::MalformedInput, "alphabet size must be >= 1");
    if (eps < 0.0 || eps > 1.0) fail(ErrorKind::MalformedInput, "eps must lie in [0,1]");
    AffineUGInstance inst(std::move(walk), m);
    std::mt19937_64 rng(seed);
    Assignment truth(static_cast<std::size_t>(inst.vertex_count()));
    for (auto& x : truth) x = static_cast<int>(bounded(rng, static_cast<std::uint64_t>(m)));
    for (auto& e : inst.edges())
        e.shift = mod(truth[static_cast<std::size_t>(e.u)] - truth[static_cast<std::size_t>(e.v)], m);

    // corrupt a seeded edge subset of total weight <= eps
    std::vector<std::size_t> order(inst.edges().size());
    std::iota(order.begin(), order.end(), 0);
    seeded_shuffle(order, rng);
    double corrupted = 0.0;
    for (std::size_t ei : order) {
        auto& e = inst.edges()[ei];
        if (corrupted + e.weight <= eps + 1e-12) {
            e.shift = static_cast<int>(bounded(rng, static_cast<std::uint64_t>(m)));
            corrupted += e.weight;
        }
    }
    return {std::move(inst), std::move(truth), corrupted};
}

double value(const AffineUGInstance& inst, const Assignment& x) {
    if (static_cast<Eigen::Index>(x.size()) != inst.vertex_count())
        fail(ErrorKind::MalformedInput, "assignment length mismatch");
    const int m = inst.alphabet_size();
    double sat = 0.0, total = 0.0;
    for (const auto& e : inst.edges()) {
        total += e.weight;
        if (mod(x[static_cast<std::size_t>(e.u)] - x[static_cast<std::size_t>(e.v)], m) == e.shift)
            sat += e.weight;
    }
    return total > 0 ? sat / total : 1.0;
}

double restricted_value(const AffineUGInstance& inst, const PartialAssignment& x) {
    const int m = inst.alphabet_size();
    double sat = 0.0, total = 0.0;
    for (const auto& e : inst.edges()) {
        const auto& xu = x[static_cast<std::size_t>(e.u)];
        const auto& xv = x[static_cast<std::size_t>(e.v)];
        if (!xu || !xv) continue;
        total += e.weight;
        if (mod(*xu - *xv, m) == e.shift) sat += e.weight;
    }
    return total > 0 ? sat / total : 0.0;
}

Assignment random_baseline(const AffineUGInstance& inst, std::uint64_t seed) {
    std::mt19937_64 rng(mix_seed(seed, 2));
    Assignment x(static_cast<std::size_t>(inst.vertex_count()));
    for (auto& v : x)
        v = static_cast<int>(bounded(rng, static_cast<std::uint64_t>(inst.alphabet_size())));
    return x;
}

namespace {

// Maximum-weight spanning forest propagation within `subset`, roots at 0.
void propagate_forest(const AffineUGInstance& inst, const std::vector<Eigen::Index>& subset,
                      PartialAssignment& x) {
    const int m = inst.alphabet_size();
    std::vector<char> in_subset(static_cast<std::size_t>(inst.vertex_count()), 0);
    for (auto v : subset) in_subset[static_cast<std::size_t>(v)] = 1;
    std::vector<char> done(static_cast<std::size_t>(inst.vertex_count()), 0);
    // Prim with a priority queue per component, components rooted in subset order.
    using Item = std::tuple<double, Eigen::Index, Eigen::Index, int>; // weight, from, to, shift u->to
    for (auto root : subset) {
        if (done[static_cast<std::size_t>(root)]) continue;
        x[static_cast<std::size_t>(root)] = 0;
        done[static_cast<std::size_t>(root)] = 1;
        std::priority_queue<Item> pq;
        auto push_edges = [&](Eigen::Index u) {
            for (const auto& [ei, sign] : inst.adjacency()[static_cast<std::size_t>(u)]) {
                const auto& e = inst.edges()[static_cast<std::size_t>(ei)];
                const Eigen::Index to = sign > 0 ? e.v : e.u;
                if (!in_subset[static_cast<std::size_t>(to)] || done[static_cast<std::size_t>(to)])
                    continue;
                // constraint X_u - X_to = sign * shift
                pq.emplace(e.weight, u, to, sign > 0 ? e.shift : mod(-e.shift, m));
            }
        };
        push_edges(root);
        while (!pq.empty()) {
            auto [w, from, to, s] = pq.top();
            pq.pop();
            if (done[static_cast<std::size_t>(to)]) continue;
            x[static_cast<std::size_t>(to)] = mod(*x[static_cast<std::size_t>(from)] - s, m);
            done[static_cast<std::size_t>(to)] = 1;
            push_edges(to);
        }
    }
}

// Each vertex moves to the value maximizing its satisfied incident weight
// among assigned neighbors within `scope`; at most 20 sweeps.
void best_response(const AffineUGInstance& inst, const std::vector<Eigen::Index>& movable,
                   const std::vector<char>& scope, PartialAssignment& x) {
    const int m = inst.alphabet_size();
    std::vector<double> score(static_cast<std::size_t>(m));
    for (int sweep = 0; sweep < 20; ++sweep) {
        bool changed = false;
        for (auto v : movable) {
            std::fill(score.begin(), score.end(), 0.0);
            for (const auto& [ei, sign] : inst.adjacency()[static_cast<std::size_t>(v)]) {
                const auto& e = inst.edges()[static_cast<std::size_t>(ei)];
                const Eigen::Index other = sign > 0 ? e.v : e.u;
                if (other == v) continue; // self-loop satisfaction ignores the value
                if (!scope[static_cast<std::size_t>(other)] || !x[static_cast<std::size_t>(other)])
                    continue;
                // want X_v = X_other + sign * shift ... X_u - X_v = s with sign
                const int want = sign > 0
                                     ? mod(*x[static_cast<std::size_t>(other)] + e.shift, m)
                                     : mod(*x[static_cast<std::size_t>(other)] - e.shift, m);
                score[static_cast<std::size_t>(want)] += e.weight;
            }
            int best = *x[static_cast<std::size_t>(v)];
            double bestscore = score[static_cast<std::size_t>(best)];
            for (int c = 0; c < m; ++c)
                if (score[static_cast<std::size_t>(c)] > bestscore + 1e-15) {
                    best = c;
                    bestscore = score[static_cast<std::size_t>(c)];
                }
            if (best != *x[static_cast<std::size_t>(v)]) {
                x[static_cast<std::size_t>(v)] = best;
                changed = true;
            }
        }
        if (!changed) break;
    }
}

} // namespace

PartialAssignment propagation_solve(const AffineUGInstance& inst,
                                    const std::vector<Eigen::Index>& subset) {
    if (subset.empty()) fail(ErrorKind::MalformedInput, "empty vertex subset");
    PartialAssignment x(static_cast<std::size_t>(inst.vertex_count()));
    propagate_forest(inst, subset, x);
    std::vector<char> scope(static_cast<std::size_t>(inst.vertex_count()), 0);
    for (auto v : subset) scope[static_cast<std::size_t>(v)] = 1;
    best_response(inst, subset, scope, x);
    return x;
}

namespace {

// Shifts every solved component by the constant that best agrees with the
// committed neighbors, then lets the new vertices best-respond against all
// assigned ones. The affine structure makes the per-component shift exact.
void align_with_committed(const AffineUGInstance& inst, const std::vector<Eigen::Index>& subset,
                          PartialAssignment& fresh, const PartialAssignment& committed) {
    const int m = inst.alphabet_size();
    if (m == 1) return;
    // component labels within subset via union-find over internal edges
    std::vector<char> in_subset(static_cast<std::size_t>(inst.vertex_count()), 0);
    for (auto v : subset) in_subset[static_cast<std::size_t>(v)] = 1;
    std::vector<Eigen::Index> parent(static_cast<std::size_t>(inst.vertex_count()));
    std::iota(parent.begin(), parent.end(), 0);
    std::function<Eigen::Index(Eigen::Index)> find = [&](Eigen::Index a) {
        while (parent[static_cast<std::size_t>(a)] != a) {
            parent[static_cast<std::size_t>(a)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
            a = parent[static_cast<std::size_t>(a)];
        }
        return a;
    };
    for (const auto& e : inst.edges())
        if (e.u != e.v && in_subset[static_cast<std::size_t>(e.u)] &&
            in_subset[static_cast<std::size_t>(e.v)])
            parent[static_cast<std::size_t>(find(e.u))] = find(e.v);

    // boundary agreement per component and candidate shift
    std::map<Eigen::Index, std::vector<double>> gain;
    for (const auto& e : inst.edges()) {
        Eigen::Index inside = -1, outside = -1;
        int sign = +1; // orientation: constraint X_inside - X_outside = sign * shift
        if (in_subset[static_cast<std::size_t>(e.u)] && !in_subset[static_cast<std::size_t>(e.v)]) {
            inside = e.u;
            outside = e.v;
            sign = +1;
        } else if (!in_subset[static_cast<std::size_t>(e.u)] &&
                   in_subset[static_cast<std::size_t>(e.v)]) {
            inside = e.v;
            outside = e.u;
            sign = -1;
        } else {
            continue;
        }
        if (!committed[static_cast<std::size_t>(outside)]) continue;
        const Eigen::Index comp = find(inside);
        auto& g = gain[comp];
        if (g.empty()) g.assign(static_cast<std::size_t>(m), 0.0);
        // satisfied iff fresh[inside] + c - committed[outside] = sign * shift
        const int want = mod(sign * e.shift + *committed[static_cast<std::size_t>(outside)] -
                                 *fresh[static_cast<std::size_t>(inside)],
                             m);
        g[static_cast<std::size_t>(want)] += e.weight;
    }
    std::map<Eigen::Index, int> best_shift;
    for (const auto& [comp, g] : gain) {
        int best = 0;
        for (int c = 1; c < m; ++c)
            if (g[static_cast<std::size_t>(c)] > g[static_cast<std::size_t>(best)] + 1e-15) best = c;
        best_shift[comp] = best;
    }
    for (auto v : subset) {
        const auto it = best_shift.find(find(v));
        if (it != best_shift.end())
            fresh[static_cast<std::size_t>(v)] = mod(*fresh[static_cast<std::size_t>(v)] + it->second, m);
    }
}

} // namespace

RoundingResult iterated_link_rounding(const AffineUGInstance& inst, double eps,
                                      std::uint64_t seed, std::optional<int> r_override) {
    const Complex& cx = inst.complex();
    const int k = inst.level();
    RoundingResult out;
    if (r_override) {
        out.r = *r_override;
    } else {
        const int pred = st_rank_predicted(inst.walk(), 1.0 - 16.0 * eps);
        out.r = std::clamp(pred - 1, 0, k / 2);
    }

    const auto& faces_r = cx.faces(out.r);
    PartialAssignment committed(static_cast<std::size_t>(inst.vertex_count()));
    std::vector<std::vector<Eigen::Index>> link_members(faces_r.size());
    {
        const auto& kfaces = cx.faces(k);
        for (std::size_t i = 0; i < kfaces.size(); ++i) {
            for (std::size_t t = 0; t < faces_r.size(); ++t)
                if (contains(kfaces[i], faces_r[t]))
                    link_members[t].push_back(static_cast<Eigen::Index>(i));
        }
    }

    std::size_t unassigned = static_cast<std::size_t>(inst.vertex_count());
    bool first = true;
    while (unassigned > 0) {
        double best_score = -1.0;
        std::size_t best_link = faces_r.size();
        PartialAssignment best_assign;
        std::vector<Eigen::Index> best_subset;
        for (std::size_t t = 0; t < faces_r.size(); ++t) {
            std::vector<Eigen::Index> subset;
            for (auto v : link_members[t])
                if (!committed[static_cast<std::size_t>(v)]) subset.push_back(v);
            if (subset.empty()) continue;
            PartialAssignment local = propagation_solve(inst, subset);
            align_with_committed(inst, subset, local, committed);
            // best-response against committed neighbors too
            {
                std::vector<char> scope(static_cast<std::size_t>(inst.vertex_count()), 0);
                for (auto v : subset) scope[static_cast<std::size_t>(v)] = 1;
                PartialAssignment merged = committed;
                for (auto v : subset) {
                    merged[static_cast<std::size_t>(v)] = local[static_cast<std::size_t>(v)];
                    scope[static_cast<std::size_t>(v)] = 1;
                }
                for (Eigen::Index v = 0; v < inst.vertex_count(); ++v)
                    if (committed[static_cast<std::size_t>(v)]) scope[static_cast<std::size_t>(v)] = 1;
                best_response(inst, subset, scope, merged);
                for (auto v : subset) local[static_cast<std::size_t>(v)] = merged[static_cast<std::size_t>(v)];
            }
            double score = 0.0;
            for (const auto& e : inst.edges()) {
                const auto& xu = local[static_cast<std::size_t>(e.u)];
                const auto& xv = local[static_cast<std::size_t>(e.v)];
                if (!xu || !xv || committed[static_cast<std::size_t>(e.u)] ||
                    committed[static_cast<std::size_t>(e.v)])
                    continue;
                if (mod(*xu - *xv, inst.alphabet_size()) == e.shift) score += e.weight;
            }
            if (score > best_score + 1e-15) {
                best_score = score;
                best_link = t;
                best_assign = local;
                best_subset = subset;
            }
        }
        if (best_link == faces_r.size()) break;

        RoundingRound round;
        round.link = faces_r[best_link];
        round.newly_assigned = static_cast<int>(best_subset.size());
        round.internal_satisfied = best_score;
        for (const auto& e : inst.edges()) {
            if (e.u == e.v) {
                if (!committed[static_cast<std::size_t>(e.u)] &&
                    best_assign[static_cast<std::size_t>(e.u)])
                    round.internal_weight += e.weight;
                continue;
            }
            if (!committed[static_cast<std::size_t>(e.u)] &&
                !committed[static_cast<std::size_t>(e.v)] &&
                best_assign[static_cast<std::size_t>(e.u)] &&
                best_assign[static_cast<std::size_t>(e.v)])
                round.internal_weight += e.weight;
        }
        if (first) {
            out.first_round_satisfied = best_score;
            first = false;
        }
        for (auto v : best_subset) {
            committed[static_cast<std::size_t>(v)] = best_assign[static_cast<std::size_t>(v)];
            --unassigned;
        }
        out.rounds.push_back(std::move(round));
    }

    std::mt19937_64 rng(mix_seed(seed, 3));
    out.assignment.resize(static_cast<std::size_t>(inst.vertex_count()));
    for (Eigen::Index v = 0; v < inst.vertex_count(); ++v) {
        out.assignment[static_cast<std::size_t>(v)] =
            committed[static_cast<std::size_t>(v)]
                ? *committed[static_cast<std::size_t>(v)]
                : static_cast<int>(bounded(rng, static_cast<std::uint64_t>(inst.alphabet_size())));
    }
    out.value = value(inst, out.assignment);
    out.baseline_value = value(inst, random_baseline(inst, seed));
    return out;
}

FallbackDecision expander_fallback_check(const HDWalk& m, double gap_threshold_scale) {
    FallbackDecision d;
    d.laziness = laziness(m);
    const Eigen::VectorXd& spec = m.spectrum();
    d.spectral_gap = spec.size() >= 2 ? 1.0 - spec[spec.size() - 2] : 1.0;
    d.gap_threshold = gap_threshold_scale / std::max(1, m.level());
    d.expander_route = d.laziness >= 0.1 || d.spectral_gap >= d.gap_threshold;
    return d;
}

std::string instance_to_json(const AffineUGInstance& inst) {
    nlohmann::json j;
    j["m"] = inst.alphabet_size();
    const auto& faces = inst.complex().faces(inst.level());
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& e : inst.edges()) {
        arr.push_back({{"u", faces[static_cast<std::size_t>(e.u)]},
                       {"v", faces[static_cast<std::size_t>(e.v)]},
                       {"w", e.weight},
                       {"s", e.shift}});
    }
    j["edges"] = std::move(arr);
    return j.dump(2) + "\n";
}

void save_instance(const AffineUGInstance& inst, const std::filesystem::path& path) {
    const std::string body = instance_to_json(inst);
    const auto tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) fail(ErrorKind::MalformedInput, "cannot open " + path.string());
        out << body;
    }
    std::filesystem::rename(tmp, path);
}

std::string RoundingResult::to_json() const {
    nlohmann::json j;
    j["r"] = r;
    j["value"] = value;
    j["baseline"] = baseline_value;
    j["first_round_satisfied"] = first_round_satisfied;
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& rd : rounds) {
        arr.push_back({{"link", rd.link},
                       {"newly_assigned", rd.newly_assigned},
                       {"internal_weight", rd.internal_weight},
                       {"internal_satisfied", rd.internal_satisfied}});
    }
    j["rounds"] = std::move(arr);
    return j.dump(2);
}

std::string FallbackDecision::to_json() const {
    nlohmann::json j;
    j["laziness"] = laziness;
    j["spectral_gap"] = spectral_gap;
    j["gap_threshold"] = gap_threshold;
    j["expander_route"] = expander_route;
    return j.dump(2);
}

} // namespace hdx
