#include "hdx/expansion.hpp"

#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

#include "hdx/error.hpp"
#include "hdx/strips.hpp"

namespace hdx {

Eigen::VectorXd indicator(const Complex& cx, int k, const std::vector<Face>& faces) {
    Eigen::VectorXd ind = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(cx.level_size(k)));
    for (const auto& f : faces) {
        const auto idx = cx.index_of(k, f);
        if (!idx) fail(ErrorKind::UnknownFace, "not a k-face: " + face_to_string(f));
        ind[static_cast<Eigen::Index>(*idx)] = 1.0;
    }
    return ind;
}

Eigen::VectorXd link_indicator(const Complex& cx, int k, const Face& tau) {
    if (!tau.empty() && !cx.has_face(tau))
        fail(ErrorKind::UnknownFace, "not a face: " + face_to_string(tau));
    const auto& lv = cx.faces(k);
    Eigen::VectorXd ind = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(lv.size()));
    for (std::size_t i = 0; i < lv.size(); ++i)
        if (contains(lv[i], tau)) ind[static_cast<Eigen::Index>(i)] = 1.0;
    return ind;
}

ExpansionRecord expansion(const HDWalk& m, const Eigen::VectorXd& ind) {
    const Complex& cx = m.complex();
    const int k = m.level();
    const Eigen::VectorXd& pi = cx.weights(k);
    const double alpha = pi.dot(ind);
    if (alpha <= 0.0) fail(ErrorKind::MalformedInput, "empty set");

    const Eigen::VectorXd mind = m.matrix().apply(ind);
    // E_{v ~ Pi|S} of the one-step escape probability
    double stay = 0.0;
    for (Eigen::Index v = 0; v < ind.size(); ++v)
        if (ind[v] > 0.5) stay += pi[v] * mind[v];
    ExpansionRecord rec;
    rec.alpha = alpha;
    rec.phi = 1.0 - stay / alpha;
    rec.phi_quadratic = 1.0 - cx.inner(k, ind, mind) / alpha;
    if (std::abs(rec.phi - rec.phi_quadratic) > 1e-10)
        throw std::logic_error("expansion definitions disagree");
    return rec;
}

Eigen::VectorXd local_expectation(const Complex& cx, int k, const Eigen::VectorXd& f, int i) {
    if (i > k) fail(ErrorKind::MalformedInput, "local_expectation needs i <= k");
    return down_composed(cx, k, i) * f;
}

Eigen::VectorXd ell2_profile(const Complex& cx, int k, const Eigen::VectorXd& ind, int r) {
    const double mean = cx.weights(k).dot(ind);
    if (mean <= 0.0) fail(ErrorKind::MalformedInput, "empty set");
    Eigen::VectorXd eps(r);
    for (int i = 1; i <= r; ++i) {
        const Eigen::VectorXd loc = local_expectation(cx, k, ind, i);
        const Eigen::VectorXd& pi = cx.weights(i);
        const double mu = pi.dot(loc);
        const double var = (pi.array() * (loc.array() - mu).square()).sum();
        eps[i - 1] = var / mean;
    }
    return eps;
}

Eigen::VectorXd ellinf_profile(const Complex& cx, int k, const Eigen::VectorXd& f, int r) {
    const double mean = cx.weights(k).dot(f);
    Eigen::VectorXd eps(r);
    for (int i = 1; i <= r; ++i) {
        const Eigen::VectorXd loc = local_expectation(cx, k, f, i);
        eps[i - 1] = (loc.array() - mean).abs().maxCoeff();
    }
    return eps;
}

double variance_identity_check(const Complex& cx, int k, const Eigen::VectorXd& f, int ell,
                               const LevelSetDecomposition& dec) {
    const Eigen::VectorXd loc = local_expectation(cx, k, f, ell);
    const Eigen::VectorXd& pil = cx.weights(ell);
    const double mu = pil.dot(loc);
    const double var = (pil.array() * (loc.array() - mu).square()).sum();
    double proj = 0.0;
    for (int j = 1; j <= ell; ++j)
        proj += binomial(ell, j) / binomial(k, j) * cx.inner(k, f, dec.components[static_cast<std::size_t>(j)]);
    const double ff = cx.inner(k, f, f);
    if (ff == 0.0) return 0.0;
    return std::abs(var - proj) / ff;
}

double variance_identity_check(const Complex& cx, int k, const Eigen::VectorXd& f, int ell) {
    return variance_identity_check(cx, k, f, ell, decompose(cx, k, f));
}

ProjectionBound projection_bound_check(const Complex& cx, int k, const Eigen::VectorXd& ind,
                                       int i, double gamma_value) {
    const auto dec = decompose(cx, k, ind);
    const double mean = cx.weights(k).dot(ind);
    const Eigen::VectorXd eps = ell2_profile(cx, k, ind, i);
    ProjectionBound out;
    out.lhs = cx.inner(k, ind, dec.components[static_cast<std::size_t>(i)]);
    out.rhs_c0 = binomial(k, i) * eps[i - 1] * std::abs(mean);
    out.slack_c0 = out.rhs_c0 - out.lhs;
    const double ff = cx.inner(k, ind, ind);
    out.required_c = (out.slack_c0 < 0 && gamma_value > 0 && ff > 0)
                         ? -out.slack_c0 / (gamma_value * ff)
                         : 0.0;
    return out;
}

LinkExpansionProfile link_expansion_profile(const HDWalk& m) {
    const Complex& cx = m.complex();
    const int k = m.level();
    LinkExpansionProfile prof;
    prof.lambdas = walk_lambdas(m);
    prof.max_abs_error = Eigen::VectorXd::Zero(k + 1);
    prof.dimension_equals_level = (cx.dimension() == k);
    for (int i = 0; i <= k; ++i) {
        double worst = 0.0;
        for (const auto& tau : cx.faces(i)) {
            const Eigen::VectorXd ind = link_indicator(cx, k, tau);
            const auto rec = expansion(m, ind);
            prof.entries.push_back({tau, i, rec.phi, rec.alpha});
            worst = std::max(worst, std::abs(rec.phi - (1.0 - prof.lambdas[i])));
        }
        prof.max_abs_error[i] = worst;
    }
    return prof;
}

ExpansionBound expansion_lower_bound(const HDWalk& m, const Eigen::VectorXd& ind, double delta,
                                     std::optional<double> gamma_value, double c_constant) {
    if (!m.is_complete())
        fail(ErrorKind::NotApplicable, "expansion bound needs a complete walk");
    const Complex& cx = m.complex();
    const int k = m.level();
    ExpansionBound out;
    out.delta = delta;
    out.alpha = cx.weights(k).dot(ind);
    out.r = std::max(st_rank_predicted(m, delta) - 1, 0);
    const Eigen::VectorXd lambdas = walk_lambdas(m);
    out.epsilons = out.r >= 1 ? ell2_profile(cx, k, ind, out.r) : Eigen::VectorXd(0);
    double sum = 0.0;
    for (int i = 1; i <= out.r; ++i)
        sum += (lambdas[i] - delta) * binomial(k, i) * out.epsilons[i - 1];
    out.bound_c0 = 1.0 - out.alpha - (1.0 - out.alpha) * delta - sum;
    out.bound_with_c = gamma_value ? out.bound_c0 - c_constant * (*gamma_value)
                                   : std::numeric_limits<double>::quiet_NaN();
    out.measured_phi = expansion(m, ind).phi;
    return out;
}

BmFixture tightness_fixture_Bm(const ComplexPtr& cx, int m, int k, int t) {
    const int n = cx->vertex_count();
    const int d = cx->dimension();
    if (!cx->is_complete())
        fail(ErrorKind::MalformedInput, "B_m fixture needs a complete ambient complex");
    if (m < 1 || n % m != 0) fail(ErrorKind::MalformedInput, "m must divide n");
    if (2 * k - t > d) fail(ErrorKind::MalformedInput, "B_m fixture needs 2k - t <= d");
    if (t < 0 || t > k) fail(ErrorKind::MalformedInput, "need 0 <= t <= k");

    // the block is the first n/m vertices in label order
    const int cutoff = cx->faces(1)[static_cast<std::size_t>(n / m - 1)][0];
    BmFixture fx;
    fx.ind = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(cx->level_size(k)));
    const auto& faces = cx->faces(k);
    for (std::size_t i = 0; i < faces.size(); ++i) {
        if (faces[i].back() <= cutoff) {
            fx.ind[static_cast<Eigen::Index>(i)] = 1.0;
            fx.set.push_back(faces[i]);
        }
    }
    fx.exact_phi = 1.0 - binomial(n / m - k, k - t) / binomial(n - k, k - t);
    const HDWalk walk = swap_walk(cx, k, k - t);
    fx.measured_phi = expansion(walk, fx.ind).phi;
    fx.eps_measured = ell2_profile(*cx, k, fx.ind, k);
    fx.eps_formula = Eigen::VectorXd(k);
    for (int i = 1; i <= k; ++i)
        fx.eps_formula[i - 1] = binomial(n / m - i, k - i) / binomial(n - i, k - i);
    return fx;
}

LinkSearchResult nonexpansion_link_search(const HDWalk& m, const Eigen::VectorXd& ind,
                                          double delta) {
    const Complex& cx = m.complex();
    const int k = m.level();
    LinkSearchResult out;
    out.alpha = cx.weights(k).dot(ind);
    out.max_level = std::min(st_rank_predicted(m, delta / 2.0), k);
    for (int i = 1; i <= out.max_level; ++i) {
        const Eigen::VectorXd loc = local_expectation(cx, k, ind, i);
        Eigen::Index best = 0;
        const double top = loc.maxCoeff(&best);
        out.levels.push_back(
            {i, cx.faces(i)[static_cast<std::size_t>(best)], top, top - out.alpha});
    }
    return out;
}

VertexDeviation vertex_expansion_deviation(const HDWalk& m, const Face& tau) {
    const Complex& cx = m.complex();
    const int k = m.level();
    const Eigen::VectorXd ind = link_indicator(cx, k, tau);
    const Eigen::VectorXd mind = m.matrix().apply(ind);
    const Eigen::VectorXd& pi = cx.weights(k);
    double alpha = 0.0, mean = 0.0;
    for (Eigen::Index v = 0; v < ind.size(); ++v)
        if (ind[v] > 0.5) {
            alpha += pi[v];
            mean += pi[v] * (1.0 - mind[v]);
        }
    if (alpha <= 0.0) fail(ErrorKind::UnknownFace, "link has no k-faces");
    const double phi_link = mean / alpha;
    VertexDeviation out;
    out.phi_link = phi_link;
    for (Eigen::Index v = 0; v < ind.size(); ++v) {
        if (ind[v] > 0.5) {
            const double dev = std::abs((1.0 - mind[v]) - phi_link);
            out.mean_abs += pi[v] / alpha * dev;
            out.max_abs = std::max(out.max_abs, dev);
        }
    }
    return out;
}

std::string ExpansionRecord::to_json() const {
    nlohmann::json j;
    j["alpha"] = alpha;
    j["phi"] = phi;
    j["phi_quadratic"] = phi_quadratic;
    return j.dump(2);
}

std::string LinkExpansionProfile::to_json() const {
    nlohmann::json j;
    std::vector<double> l(lambdas.data(), lambdas.data() + lambdas.size());
    j["lambdas"] = l;
    std::vector<double> err(max_abs_error.data(), max_abs_error.data() + max_abs_error.size());
    j["max_abs_error"] = err;
    j["dimension_equals_level"] = dimension_equals_level;
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& e : entries)
        arr.push_back({{"face", e.face}, {"level", e.level}, {"phi", e.phi}, {"alpha", e.alpha}});
    j["links"] = std::move(arr);
    return j.dump(2);
}

std::string LinkExpansionProfile::to_csv() const {
    std::string out = "level,face,alpha,phi\n";
    for (const auto& e : entries) {
        std::string face;
        for (std::size_t i = 0; i < e.face.size(); ++i) {
            if (i) face += " ";
            face += std::to_string(e.face[i]);
        }
        out += std::to_string(e.level) + ",\"" + face + "\"," + std::to_string(e.alpha) + "," +
               std::to_string(e.phi) + "\n";
    }
    return out;
}

} // namespace hdx
