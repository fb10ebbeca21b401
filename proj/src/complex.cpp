#include "hdx/complex.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "hdx/graph.hpp"

namespace hdx {

namespace {

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

} // namespace

Complex Complex::from_top_faces(std::vector<Face> top_faces,
                                std::optional<Eigen::VectorXd> top_weights) {
    if (top_faces.empty())
        fail(ErrorKind::MalformedInput, "no top faces");
    const int d = static_cast<int>(top_faces[0].size());
    if (d < 1)
        fail(ErrorKind::MalformedInput, "top faces must have cardinality >= 1");
    for (auto& f : top_faces) {
        if (static_cast<int>(f.size()) != d)
            fail(ErrorKind::MalformedInput, "mixed face sizes in top level");
        if (!is_canonical(f))
            fail(ErrorKind::MalformedInput, "face not sorted/distinct: " + face_to_string(f));
    }

    std::vector<std::size_t> order(top_faces.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return top_faces[a] < top_faces[b]; });
    for (std::size_t i = 1; i < order.size(); ++i)
        if (top_faces[order[i - 1]] == top_faces[order[i]])
            fail(ErrorKind::MalformedInput, "duplicate top face " + face_to_string(top_faces[order[i]]));

    Eigen::VectorXd w;
    if (top_weights) {
        if (top_weights->size() != static_cast<Eigen::Index>(top_faces.size()))
            fail(ErrorKind::MalformedInput, "weight vector length mismatch");
        if ((top_weights->array() < 0).any())
            fail(ErrorKind::MalformedInput, "negative top weight");
        const double total = top_weights->sum();
        if (total <= 0)
            fail(ErrorKind::MalformedInput, "zero total weight");
        w = *top_weights / total;
    } else {
        w = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(top_faces.size()),
                                      1.0 / static_cast<double>(top_faces.size()));
    }

    Complex cx;
    cx.dim_ = d;
    cx.levels_.resize(d + 1);
    cx.pi_.resize(d + 1);
    cx.levels_[d].reserve(top_faces.size());
    Eigen::VectorXd wtop(static_cast<Eigen::Index>(top_faces.size()));
    for (std::size_t i = 0; i < order.size(); ++i) {
        cx.levels_[d].push_back(top_faces[order[i]]);
        wtop[static_cast<Eigen::Index>(i)] = w[static_cast<Eigen::Index>(order[i])];
    }
    cx.pi_[d] = wtop;

    // Downward closure, one level at a time.
    for (int i = d - 1; i >= 0; --i) {
        std::map<Face, double> mass;
        const auto& upper = cx.levels_[i + 1];
        const auto& wupper = cx.pi_[i + 1];
        for (std::size_t j = 0; j < upper.size(); ++j) {
            const double wj = wupper[static_cast<Eigen::Index>(j)];
            for_each_subset(upper[j], i, [&](const Face& s) { mass[s] += wj; });
        }
        cx.levels_[i].reserve(mass.size());
        cx.pi_[i].resize(static_cast<Eigen::Index>(mass.size()));
        Eigen::Index idx = 0;
        for (auto& [f, m] : mass) {
            cx.levels_[i].push_back(f);
            cx.pi_[i][idx++] = m / (i + 1);
        }
    }

    cx.n_ = static_cast<int>(cx.levels_[1].size());
    return cx;
}

const std::vector<Face>& Complex::faces(int level) const {
    if (level < 0 || level > dim_)
        fail(ErrorKind::MalformedInput, "level out of range: " + std::to_string(level));
    return levels_[level];
}

const Eigen::VectorXd& Complex::weights(int level) const {
    if (level < 0 || level > dim_)
        fail(ErrorKind::MalformedInput, "level out of range: " + std::to_string(level));
    return pi_[level];
}

std::optional<std::size_t> Complex::index_of(int level, const Face& f) const {
    if (level < 0 || level > dim_) return std::nullopt;
    const auto& lv = levels_[level];
    auto it = std::lower_bound(lv.begin(), lv.end(), f);
    if (it == lv.end() || *it != f) return std::nullopt;
    return static_cast<std::size_t>(it - lv.begin());
}

bool Complex::has_face(const Face& f) const {
    const int lvl = static_cast<int>(f.size());
    if (lvl > dim_) return false;
    return index_of(lvl, f).has_value();
}

bool Complex::is_complete() const {
    const double expected = binomial(n_, dim_);
    if (static_cast<double>(levels_[dim_].size()) != expected) return false;
    const double u = 1.0 / expected;
    return (pi_[dim_].array() - u).abs().maxCoeff() < 1e-12;
}

double Complex::inner(int level, const Eigen::VectorXd& a, const Eigen::VectorXd& b) const {
    return (weights(level).array() * a.array() * b.array()).sum();
}

double Complex::norm(int level, const Eigen::VectorXd& a) const {
    return std::sqrt(std::max(0.0, inner(level, a, a)));
}

Complex build_complex(std::vector<Face> top_faces, std::optional<Eigen::VectorXd> top_weights) {
    return Complex::from_top_faces(std::move(top_faces), std::move(top_weights));
}

Complex complete_complex(int n, int d) {
    if (d < 1 || d > n)
        fail(ErrorKind::MalformedInput, "complete complex needs 1 <= d <= n");
    std::vector<int> verts(n);
    for (int i = 0; i < n; ++i) verts[i] = i + 1;
    std::vector<Face> tops;
    tops.reserve(static_cast<std::size_t>(binomial(n, d)));
    for_each_subset(verts, d, [&](const Face& f) { tops.push_back(f); });
    return Complex::from_top_faces(std::move(tops));
}

Complex punctured_complete_complex(int n) {
    if (n < 5)
        fail(ErrorKind::MalformedInput, "punctured complex needs n >= 5");
    std::vector<int> verts(n);
    for (int i = 0; i < n; ++i) verts[i] = i + 1;
    std::vector<Face> tops;
    const Face removed = {1, 2, 3};
    for_each_subset(verts, 3, [&](const Face& f) {
        if (f != removed) tops.push_back(f);
    });
    return Complex::from_top_faces(std::move(tops));
}

namespace {

bool all_link_skeletons_connected(const Complex& cx) {
    for (int i = 0; i <= cx.dimension() - 2; ++i) {
        for (const auto& tau : cx.faces(i)) {
            const Complex sub = (i == 0) ? cx : link(cx, tau).complex;
            if (sub.dimension() < 2) return false;
            auto g = skeleton_graph(sub);
            if (!is_connected(g)) return false;
        }
    }
    return true;
}

} // namespace

Complex sparsified_complex(int n, int d, double p, std::uint64_t seed) {
    if (!(p > 0.0 && p <= 1.0))
        fail(ErrorKind::GenerationFailed, "keep probability must lie in (0,1]");
    if (d < 2 || d > n)
        fail(ErrorKind::MalformedInput, "sparsified complex needs 2 <= d <= n");
    std::vector<int> verts(n);
    for (int i = 0; i < n; ++i) verts[i] = i + 1;
    std::mt19937_64 rng(seed);
    for (int attempt = 0; attempt < 100; ++attempt) {
        std::vector<Face> tops;
        for_each_subset(verts, d, [&](const Face& f) {
            if (uniform01(rng) < p) tops.push_back(f);
        });
        if (tops.empty()) continue;
        Complex cx = Complex::from_top_faces(std::move(tops));
        if (cx.vertex_count() == n && all_link_skeletons_connected(cx)) return cx;
    }
    fail(ErrorKind::GenerationFailed,
         "no connected sparsification found in 100 attempts (n=" + std::to_string(n) +
             ", d=" + std::to_string(d) + ", p=" + std::to_string(p) + ")");
}

Link link(const Complex& cx, const Face& tau) {
    if (!is_canonical(tau))
        fail(ErrorKind::UnknownFace, "not a canonical face: " + face_to_string(tau));
    const int i = static_cast<int>(tau.size());
    if (i > cx.dimension() - 1 || !cx.has_face(tau))
        fail(ErrorKind::UnknownFace, "not a face of the complex: " + face_to_string(tau));
    const int d = cx.dimension();
    std::vector<Face> tops;
    std::vector<double> ws;
    const auto& top = cx.faces(d);
    const auto& wtop = cx.weights(d);
    for (std::size_t j = 0; j < top.size(); ++j) {
        if (contains(top[j], tau)) {
            tops.push_back(face_difference(top[j], tau));
            ws.push_back(wtop[static_cast<Eigen::Index>(j)]);
        }
    }
    Eigen::VectorXd w = Eigen::Map<Eigen::VectorXd>(ws.data(), static_cast<Eigen::Index>(ws.size()));
    return Link{tau, Complex::from_top_faces(std::move(tops), w)};
}

std::vector<std::pair<Face, double>> link_faces(const Complex& cx, const Face& tau, int k) {
    const int i = static_cast<int>(tau.size());
    if (k < i || k > cx.dimension())
        fail(ErrorKind::MalformedInput, "level out of range for link_faces");
    if (!tau.empty() && !cx.has_face(tau))
        fail(ErrorKind::UnknownFace, "not a face of the complex: " + face_to_string(tau));
    std::vector<std::pair<Face, double>> out;
    const auto& lv = cx.faces(k);
    const auto& w = cx.weights(k);
    for (std::size_t j = 0; j < lv.size(); ++j)
        if (contains(lv[j], tau))
            out.emplace_back(lv[j], w[static_cast<Eigen::Index>(j)]);
    return out;
}

namespace {

using nlohmann::json;

bool weights_uniform(const Eigen::VectorXd& w) {
    const double u = 1.0 / static_cast<double>(w.size());
    return (w.array() - u).abs().maxCoeff() < 1e-15;
}

} // namespace

std::string complex_to_json(const Complex& cx) {
    json j;
    j["n"] = cx.vertex_count();
    j["d"] = cx.dimension();
    json faces = json::array();
    for (const auto& f : cx.faces(cx.dimension())) faces.push_back(f);
    j["top_faces"] = std::move(faces);
    const auto& w = cx.weights(cx.dimension());
    if (weights_uniform(w)) {
        j["weights"] = "uniform";
    } else {
        std::vector<double> ws(w.data(), w.data() + w.size());
        j["weights"] = ws;
    }
    return j.dump(2) + "\n";
}

Complex complex_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        fail(ErrorKind::ParseError, std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("top_faces"))
        fail(ErrorKind::ParseError, "complex file must be an object with top_faces");
    std::vector<Face> tops;
    try {
        tops = j.at("top_faces").get<std::vector<Face>>();
    } catch (const json::exception& e) {
        fail(ErrorKind::ParseError, std::string("bad top_faces: ") + e.what());
    }
    for (const auto& f : tops)
        if (!is_canonical(f))
            fail(ErrorKind::ParseError, "face not sorted ascending: " + face_to_string(f));
    std::optional<Eigen::VectorXd> w;
    if (j.contains("weights") && !j.at("weights").is_string()) {
        std::vector<double> ws;
        try {
            ws = j.at("weights").get<std::vector<double>>();
        } catch (const json::exception& e) {
            fail(ErrorKind::ParseError, std::string("bad weights: ") + e.what());
        }
        Eigen::VectorXd wv = Eigen::Map<Eigen::VectorXd>(ws.data(), static_cast<Eigen::Index>(ws.size()));
        if (wv.size() != static_cast<Eigen::Index>(tops.size()))
            fail(ErrorKind::ParseError, "weights length does not match top_faces");
        if ((wv.array() < 0).any())
            fail(ErrorKind::ParseError, "negative weight");
        if (std::abs(wv.sum() - 1.0) > 1e-9)
            fail(ErrorKind::ParseError, "weights must sum to 1");
        w = wv;
    }
    try {
        return Complex::from_top_faces(std::move(tops), std::move(w));
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::MalformedInput)
            fail(ErrorKind::ParseError, e.what());
        throw;
    }
}

void save_complex(const Complex& cx, const std::filesystem::path& path) {
    const std::string body = complex_to_json(cx);
    const auto tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) fail(ErrorKind::MalformedInput, "cannot open " + path.string() + " for writing");
        out << body;
    }
    std::filesystem::rename(tmp, path);
}

Complex load_complex(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::ParseError, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return complex_from_json(ss.str());
}

} // namespace hdx
