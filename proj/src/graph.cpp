#include "hdx/graph.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

#include "hdx/eigen_solver.hpp"
#include "hdx/error.hpp"

namespace hdx {

bool is_connected(const WeightedGraph& g) {
    const Eigen::Index n = g.weights.rows();
    if (n == 0) return false;
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    std::vector<Eigen::Index> stack = {0};
    seen[0] = 1;
    std::size_t count = 1;
    while (!stack.empty()) {
        const Eigen::Index u = stack.back();
        stack.pop_back();
        for (Eigen::Index v = 0; v < n; ++v) {
            if (!seen[static_cast<std::size_t>(v)] && g.weights(u, v) > 0.0) {
                seen[static_cast<std::size_t>(v)] = 1;
                ++count;
                stack.push_back(v);
            }
        }
    }
    return count == static_cast<std::size_t>(n);
}

WeightedGraph skeleton_graph(const Complex& cx) {
    if (cx.dimension() < 2)
        fail(ErrorKind::MalformedInput, "skeleton needs dimension >= 2");
    const auto& verts = cx.faces(1);
    const auto& edges = cx.faces(2);
    const auto& w2 = cx.weights(2);
    const Eigen::Index n = static_cast<Eigen::Index>(verts.size());
    WeightedGraph g;
    g.vertices = verts;
    g.weights = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const auto a = cx.index_of(1, {edges[e][0]});
        const auto b = cx.index_of(1, {edges[e][1]});
        const double w = w2[static_cast<Eigen::Index>(e)];
        g.weights(static_cast<Eigen::Index>(*a), static_cast<Eigen::Index>(*b)) += w;
        g.weights(static_cast<Eigen::Index>(*b), static_cast<Eigen::Index>(*a)) += w;
    }
    Eigen::VectorXd rs = g.weights.rowwise().sum();
    const double total = rs.sum();
    g.vertex_measure = rs / total;
    return g;
}

SpectralGapResult second_eigenvalue(const WeightedGraph& g) {
    const Eigen::Index n = g.weights.rows();
    if (n == 0) fail(ErrorKind::MalformedInput, "empty graph");
    if ((g.weights - g.weights.transpose()).cwiseAbs().maxCoeff() > 1e-12)
        fail(ErrorKind::MalformedInput, "graph weights not symmetric");
    if (!is_connected(g)) return {1.0, true};
    if (n == 1) return {0.0, false};
    Eigen::VectorXd rs = g.weights.rowwise().sum();
    Eigen::VectorXd dinv = rs.array().sqrt().inverse();
    Eigen::MatrixXd s = dinv.asDiagonal() * g.weights * dinv.asDiagonal();
    Eigen::VectorXd ev = symmetric_eigenvalues(std::move(s));
    const double low = std::abs(ev[0]);
    const double second = std::abs(ev[n - 2]);
    return {std::max(low, second), false};
}

GammaReport gamma(const Complex& cx) {
    if (cx.dimension() < 2)
        fail(ErrorKind::MalformedInput, "gamma needs dimension >= 2");
    GammaReport report;
    report.gamma = 0.0;
    for (int i = 0; i <= cx.dimension() - 2; ++i) {
        for (const auto& tau : cx.faces(i)) {
            const Complex sub = (i == 0) ? cx : link(cx, tau).complex;
            LinkSpectralRecord rec;
            rec.face = tau;
            rec.level = i;
            if (sub.dimension() < 2) {
                rec.lambda2 = 1.0;
                rec.disconnected = true;
            } else {
                const auto r = second_eigenvalue(skeleton_graph(sub));
                rec.lambda2 = r.lambda2;
                rec.disconnected = r.disconnected;
            }
            if (rec.lambda2 > report.gamma) {
                report.gamma = rec.lambda2;
                report.argmax_face = tau;
            }
            report.links.push_back(std::move(rec));
        }
    }
    return report;
}

std::string GammaReport::to_json() const {
    nlohmann::json j;
    j["gamma"] = gamma;
    j["argmax_face"] = argmax_face;
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& l : links) {
        arr.push_back({{"face", l.face},
                       {"level", l.level},
                       {"lambda2", l.lambda2},
                       {"disconnected", l.disconnected}});
    }
    j["links"] = std::move(arr);
    return j.dump(2);
}

} // namespace hdx
