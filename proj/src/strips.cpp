#include "hdx/strips.hpp"

#include <cmath>
#include <functional>
#include <limits>

#include <nlohmann/json.hpp>

#include "hdx/error.hpp"

namespace hdx {

namespace {

constexpr double kTieTol = 1e-9;

} // namespace

double pure_walk_lambda(int k, const std::vector<int>& down_positions, int ell) {
    double prod = 1.0;
    int s = 1;
    for (int pos : down_positions) {
        const double denom = std::max(ell, pos - 2 * s + k + 1);
        prod *= 1.0 - static_cast<double>(ell) / denom;
        ++s;
    }
    return prod;
}

Eigen::VectorXd walk_lambdas(const HDWalk& m) {
    const int k = m.level();
    Eigen::VectorXd out(k + 1);
    if (m.swap_params()) {
        const auto [sk, sj] = *m.swap_params();
        for (int ell = 0; ell <= k; ++ell)
            out[ell] = binomial(sk - sj, ell) / binomial(sk, ell);
        return out;
    }
    out.setZero();
    for (const auto& t : m.terms())
        for (int ell = 0; ell <= k; ++ell)
            out[ell] += t.coeff * pure_walk_lambda(k, t.down_positions, ell);
    return out;
}

Eigen::VectorXd measured_residuals(const HDWalk& m, const LiftedBases& bases) {
    const int k = m.level();
    const Complex& cx = m.complex();
    const Eigen::VectorXd lambdas = walk_lambdas(m);
    Eigen::VectorXd out(k + 1);
    for (int i = 0; i <= k; ++i) {
        double worst = 0.0;
        const Eigen::MatrixXd& b = bases.lifted[i];
        if (b.cols() > 0) {
            const Eigen::MatrixXd mb = m.matrix().apply(b);
            for (Eigen::Index c = 0; c < b.cols(); ++c) {
                const double fn = cx.norm(k, b.col(c));
                if (fn == 0.0) continue;
                const Eigen::VectorXd r = mb.col(c) - lambdas[i] * b.col(c);
                worst = std::max(worst, cx.norm(k, r) / fn);
            }
        }
        out[i] = worst;
    }
    return out;
}

std::vector<int> assign_strips(const Eigen::VectorXd& spectrum, const Eigen::VectorXd& lambdas) {
    std::vector<int> assignment(static_cast<std::size_t>(spectrum.size()), 0);
    for (Eigen::Index e = 0; e < spectrum.size(); ++e) {
        int best = 0;
        double bestd = std::numeric_limits<double>::infinity();
        for (int i = 0; i < lambdas.size(); ++i) {
            const double d = std::abs(spectrum[e] - lambdas[i]);
            if (d < bestd - kTieTol) {
                bestd = d;
                best = i;
            }
        }
        assignment[static_cast<std::size_t>(e)] = best;
    }
    return assignment;
}

StripReport stripping_report(const HDWalk& m) {
    const int k = m.level();
    StripReport rep;
    rep.lambdas = walk_lambdas(m);
    rep.residuals = measured_residuals(m, lifted_bases(m.complex(), k));
    rep.spectrum = m.spectrum();
    rep.assignment = assign_strips(rep.spectrum, rep.lambdas);

    rep.strips.resize(static_cast<std::size_t>(k + 1));
    for (int i = 0; i <= k; ++i) {
        rep.strips[static_cast<std::size_t>(i)].lambda = rep.lambdas[i];
        rep.strips[static_cast<std::size_t>(i)].min_eig = std::numeric_limits<double>::infinity();
        rep.strips[static_cast<std::size_t>(i)].max_eig = -std::numeric_limits<double>::infinity();
    }
    rep.max_deviation = 0.0;
    for (Eigen::Index e = 0; e < rep.spectrum.size(); ++e) {
        auto& s = rep.strips[static_cast<std::size_t>(rep.assignment[static_cast<std::size_t>(e)])];
        s.count += 1;
        s.min_eig = std::min(s.min_eig, rep.spectrum[e]);
        s.max_eig = std::max(s.max_eig, rep.spectrum[e]);
        rep.max_deviation =
            std::max(rep.max_deviation, std::abs(rep.spectrum[e] - s.lambda));
    }
    for (auto& s : rep.strips) {
        if (s.count == 0) {
            s.min_eig = 0.0;
            s.max_eig = 0.0;
        }
    }

    const double c_max = rep.residuals.maxCoeff();
    rep.bound_zhang = std::sqrt(static_cast<double>(k + 1)) * c_max;
    double lambda_dif = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= k; ++i)
        for (int j = i + 1; j <= k; ++j) {
            const double d = std::abs(rep.lambdas[i] - rep.lambdas[j]);
            if (d > 1e-12) lambda_dif = std::min(lambda_dif, d);
        }
    if (std::isfinite(lambda_dif) && lambda_dif > 0) {
        const double lambda_ratio = rep.lambdas.cwiseAbs().maxCoeff() / std::sqrt(lambda_dif);
        rep.bound_ko = (k + 1) * lambda_ratio * std::sqrt(c_max);
    } else {
        rep.bound_ko = std::numeric_limits<double>::infinity();
    }
    rep.pass = rep.max_deviation <= rep.bound_zhang;

    // strips whose centers are within the sum of their residuals cannot be
    // told apart (the approximate-orthogonality bound degenerates there)
    std::vector<int> group(static_cast<std::size_t>(k + 1));
    for (int i = 0; i <= k; ++i) group[static_cast<std::size_t>(i)] = i;
    std::function<int(int)> root = [&](int a) {
        while (group[static_cast<std::size_t>(a)] != a) a = group[static_cast<std::size_t>(a)];
        return a;
    };
    for (int i = 0; i <= k; ++i)
        for (int j = i + 1; j <= k; ++j)
            if (std::abs(rep.lambdas[i] - rep.lambdas[j]) <=
                rep.residuals[i] + rep.residuals[j] + 1e-12) {
                const int ri = root(i), rj = root(j);
                group[static_cast<std::size_t>(std::max(ri, rj))] = std::min(ri, rj);
            }
    std::vector<std::vector<int>> groups(static_cast<std::size_t>(k + 1));
    for (int i = 0; i <= k; ++i) groups[static_cast<std::size_t>(root(i))].push_back(i);
    for (auto& g : groups)
        if (!g.empty()) rep.merged_groups.push_back(std::move(g));
    rep.merged = rep.merged_groups.size() != static_cast<std::size_t>(k + 1);
    return rep;
}

int st_rank_predicted(const HDWalk& m, double delta) {
    const Eigen::VectorXd lambdas = walk_lambdas(m);
    int r = 0;
    for (int i = 0; i < lambdas.size(); ++i)
        if (lambdas[i] > delta) ++r;
    return r;
}

STRank st_rank(const HDWalk& m, double delta) {
    STRank out;
    out.rank_predicted = st_rank_predicted(m, delta);
    const Eigen::VectorXd lambdas = walk_lambdas(m);
    const Eigen::VectorXd& spec = m.spectrum();
    const auto assignment = assign_strips(spec, lambdas);
    std::vector<char> hit(static_cast<std::size_t>(lambdas.size()), 0);
    for (Eigen::Index e = 0; e < spec.size(); ++e)
        if (spec[e] > delta) hit[static_cast<std::size_t>(assignment[static_cast<std::size_t>(e)])] = 1;
    for (char h : hit) out.rank_empirical += h;
    return out;
}

MonotonicityResult monotonicity_check(const HDWalk& m) {
    if (!m.is_complete())
        fail(ErrorKind::NotApplicable, "monotone strip order is only claimed for complete walks");
    const Eigen::VectorXd lambdas = walk_lambdas(m);
    MonotonicityResult r;
    for (int i = 0; i + 1 < lambdas.size(); ++i) {
        if (lambdas[i] < lambdas[i + 1] - 1e-12) {
            r.monotone = false;
            r.violations.push_back(i);
        }
    }
    return r;
}

std::string StripReport::to_json() const {
    nlohmann::json j;
    std::vector<double> l(lambdas.data(), lambdas.data() + lambdas.size());
    std::vector<double> r(residuals.data(), residuals.data() + residuals.size());
    j["lambdas"] = l;
    j["residuals"] = r;
    j["max_deviation"] = max_deviation;
    j["bound_zhang"] = bound_zhang;
    j["bound_ko"] = std::isfinite(bound_ko) ? nlohmann::json(bound_ko) : nlohmann::json();
    j["pass"] = pass;
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& s : strips)
        arr.push_back({{"lambda", s.lambda}, {"count", s.count}, {"min", s.min_eig}, {"max", s.max_eig}});
    j["strips"] = std::move(arr);
    j["merged"] = merged;
    j["merged_groups"] = merged_groups;
    std::vector<double> spec(spectrum.data(), spectrum.data() + spectrum.size());
    j["spectrum"] = spec;
    return j.dump(2);
}

} // namespace hdx
