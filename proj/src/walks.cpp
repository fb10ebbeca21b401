#include "hdx/walks.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

#include "hdx/eigen_solver.hpp"
#include "hdx/error.hpp"

namespace hdx {

namespace {

constexpr double kAffineTol = 1e-12;
constexpr double kRowSumTol = 1e-10;
constexpr double kSelfAdjointTol = 1e-10;
constexpr double kClampHdWalk = 1e-8;
constexpr double kClampSwapAjt = 1e-6;

void check_level(const Complex& cx, int k, int lo = 0) {
    if (k < lo || k > cx.dimension())
        fail(ErrorKind::MalformedInput, "level out of range: " + std::to_string(k));
}

void validate_walk_matrix(WalkMatrix& m, double clamp_tol, ErrorKind negative_kind) {
    const double worst = m.clamp_negatives(clamp_tol);
    if (worst < -clamp_tol)
        fail(negative_kind, "transition entry " + std::to_string(worst) +
                                " below -" + std::to_string(clamp_tol));
    const Eigen::VectorXd rs = m.row_sums();
    const double rserr = (rs.array() - 1.0).abs().maxCoeff();
    if (rserr > kRowSumTol)
        fail(ErrorKind::NotAWalk, "row sums deviate from 1 by " + std::to_string(rserr));
}

} // namespace

Word word_from_string(const std::string& s) {
    Word w;
    w.reserve(s.size());
    for (char c : s) {
        if (c == 'U' || c == 'u') w.push_back(Step::Up);
        else if (c == 'D' || c == 'd') w.push_back(Step::Down);
        else fail(ErrorKind::MalformedWalk, std::string("bad word symbol '") + c + "'");
    }
    return w;
}

std::string word_to_string(const Word& w) {
    std::string s;
    for (auto st : w) s += (st == Step::Up) ? 'U' : 'D';
    return s;
}

std::vector<int> down_positions_of(const Word& w) {
    std::vector<int> pos;
    for (std::size_t i = 0; i < w.size(); ++i)
        if (w[i] == Step::Down) pos.push_back(static_cast<int>(i) + 1);
    return pos;
}

LevelOperator up_operator(const Complex& cx, int k) {
    check_level(cx, k);
    if (k + 1 > cx.dimension())
        fail(ErrorKind::MalformedInput, "up operator needs k < d");
    const auto& upper = cx.faces(k + 1);
    SparseRowMajor m(static_cast<Eigen::Index>(upper.size()),
                     static_cast<Eigen::Index>(cx.level_size(k)));
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(upper.size() * static_cast<std::size_t>(k + 1));
    const double inv = 1.0 / (k + 1);
    for (std::size_t y = 0; y < upper.size(); ++y) {
        for_each_subset(upper[y], k, [&](const Face& x) {
            trips.emplace_back(static_cast<int>(y), static_cast<int>(*cx.index_of(k, x)), inv);
        });
    }
    m.setFromTriplets(trips.begin(), trips.end());
    return {k, k + 1, std::move(m)};
}

LevelOperator down_operator(const Complex& cx, int k) {
    check_level(cx, k, 1);
    const auto& upper = cx.faces(k);
    const auto& wu = cx.weights(k);
    const auto& wl = cx.weights(k - 1);
    SparseRowMajor m(static_cast<Eigen::Index>(cx.level_size(k - 1)),
                     static_cast<Eigen::Index>(upper.size()));
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(upper.size() * static_cast<std::size_t>(k));
    for (std::size_t y = 0; y < upper.size(); ++y) {
        const double wy = wu[static_cast<Eigen::Index>(y)];
        for_each_subset(upper[y], k - 1, [&](const Face& x) {
            const auto xi = *cx.index_of(k - 1, x);
            trips.emplace_back(static_cast<int>(xi), static_cast<int>(y),
                               wy / (k * wl[static_cast<Eigen::Index>(xi)]));
        });
    }
    m.setFromTriplets(trips.begin(), trips.end());
    return {k, k - 1, std::move(m)};
}

SparseRowMajor up_composed(const Complex& cx, int k, int i) {
    if (i > k) fail(ErrorKind::MalformedInput, "up_composed needs i <= k");
    SparseRowMajor m(static_cast<Eigen::Index>(cx.level_size(i)),
                     static_cast<Eigen::Index>(cx.level_size(i)));
    m.setIdentity();
    for (int lvl = i; lvl < k; ++lvl) m = up_operator(cx, lvl).matrix * m;
    return m;
}

SparseRowMajor down_composed(const Complex& cx, int k, int i) {
    if (i > k) fail(ErrorKind::MalformedInput, "down_composed needs i <= k");
    SparseRowMajor m(static_cast<Eigen::Index>(cx.level_size(k)),
                     static_cast<Eigen::Index>(cx.level_size(k)));
    m.setIdentity();
    for (int lvl = k; lvl > i; --lvl) m = down_operator(cx, lvl).matrix * m;
    return m;
}

PureWalk pure_walk(const Complex& cx, int k, const Word& word) {
    check_level(cx, k);
    int ups = 0, downs = 0, lvl = k;
    for (auto st : word) {
        lvl += (st == Step::Up) ? 1 : -1;
        (st == Step::Up ? ups : downs)++;
        if (lvl < 0 || lvl > cx.dimension())
            fail(ErrorKind::MalformedWalk, "word leaves levels [0,d]: " + word_to_string(word));
    }
    if (ups != downs)
        fail(ErrorKind::MalformedWalk, "unbalanced word: " + word_to_string(word));
    SparseRowMajor m(static_cast<Eigen::Index>(cx.level_size(k)),
                     static_cast<Eigen::Index>(cx.level_size(k)));
    m.setIdentity();
    lvl = k;
    for (auto st : word) {
        if (st == Step::Up) {
            m = up_operator(cx, lvl).matrix * m;
            ++lvl;
        } else {
            m = down_operator(cx, lvl).matrix * m;
            --lvl;
        }
    }
    PureWalk pw;
    pw.level = k;
    pw.word = word;
    pw.down_positions = down_positions_of(word);
    pw.matrix = pack_walk_matrix(std::move(m));
    return pw;
}

HDWalk::HDWalk(ComplexPtr cx, int level, std::vector<WalkTerm> terms, WalkMatrix matrix,
               bool is_complete, std::optional<std::pair<int, int>> swap_params)
    : complex_(std::move(cx)),
      level_(level),
      terms_(std::move(terms)),
      matrix_(std::move(matrix)),
      is_complete_(is_complete),
      swap_params_(swap_params) {
    for (const auto& t : terms_) {
        weight_ += std::abs(t.coeff);
        height_ = std::max(height_, static_cast<int>(t.down_positions.size()));
    }
    if (terms_.empty() && swap_params_) {
        weight_ = 1.0;
        height_ = swap_params_->second;
    }
    self_adjoint_gap_ = matrix_.self_adjointness_gap(complex_->weights(level_));
}

const Eigen::VectorXd& HDWalk::stationary() const { return complex_->weights(level_); }

const Eigen::VectorXd& HDWalk::spectrum() const {
    if (!spectrum_) {
        const Eigen::VectorXd& pi = stationary();
        const Eigen::Index n = matrix_.rows();
        Eigen::VectorXd sq = pi.array().sqrt();
        Eigen::MatrixXd sym = Eigen::MatrixXd::Zero(n, n);
        matrix_.for_each_entry([&](Eigen::Index i, Eigen::Index j, double v) {
            sym(i, j) = sq[i] * v / sq[j];
        });
        // symmetrize in place; the matrix is only off by round-off
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < i; ++j) {
                const double avg = 0.5 * (sym(i, j) + sym(j, i));
                sym(i, j) = avg;
                sym(j, i) = avg;
            }
        spectrum_ = symmetric_eigenvalues_inplace(sym);
    }
    return *spectrum_;
}

HDWalk hd_walk(const ComplexPtr& cx, int k, const std::vector<std::pair<double, Word>>& terms,
               bool declared_complete) {
    if (terms.empty()) fail(ErrorKind::MalformedInput, "no walk terms");
    double alpha_sum = 0.0;
    for (const auto& [a, w] : terms) alpha_sum += a;
    if (std::abs(alpha_sum - 1.0) > kAffineTol)
        fail(ErrorKind::MalformedInput,
             "coefficients must sum to 1, got " + std::to_string(alpha_sum));

    std::vector<WalkTerm> specs;
    WalkMatrix acc;
    bool first = true;
    for (const auto& [a, w] : terms) {
        PureWalk pw = pure_walk(*cx, k, w);
        specs.push_back({a, pw.word, pw.down_positions});
        if (first) {
            acc = pw.matrix.scaled(a);
            first = false;
        } else {
            acc = acc.plus(pw.matrix, a);
        }
    }
    validate_walk_matrix(acc, kClampHdWalk, ErrorKind::NotAWalk);
    HDWalk walk(cx, k, std::move(specs), std::move(acc), declared_complete);
    if (walk.self_adjointness_gap() > kSelfAdjointTol)
        fail(ErrorKind::NotSelfAdjoint,
             "affine combination is not self-adjoint (gap " +
                 std::to_string(walk.self_adjointness_gap()) + ")");
    return walk;
}

HDWalk identity_walk(const ComplexPtr& cx, int k) {
    auto w = hd_walk(cx, k, {{1.0, Word{}}}, true);
    w.set_description("I:" + std::to_string(k));
    return w;
}

HDWalk canonical_walk(const ComplexPtr& cx, int k, int j) {
    if (j < 0 || k < 0 || k + j > cx->dimension())
        fail(ErrorKind::MalformedInput, "canonical walk needs k+j <= d");
    Word word;
    word.insert(word.end(), static_cast<std::size_t>(j), Step::Up);
    word.insert(word.end(), static_cast<std::size_t>(j), Step::Down);
    auto w = hd_walk(cx, k, {{1.0, word}}, true);
    w.set_description("N:" + std::to_string(k) + ":" + std::to_string(j));
    return w;
}

HDWalk lower_walk_power(const ComplexPtr& cx, int k, int t) {
    if (k < 1 || k > cx->dimension() || t < 0)
        fail(ErrorKind::MalformedInput, "lower walk needs 1 <= k <= d, t >= 0");
    Word word;
    for (int i = 0; i < t; ++i) {
        word.push_back(Step::Down);
        word.push_back(Step::Up);
    }
    auto w = hd_walk(cx, k, {{1.0, word}}, true);
    w.set_description("UD^" + std::to_string(t) + ":" + std::to_string(k));
    return w;
}

HDWalk swap_walk_direct(const ComplexPtr& cx, int k, int j) {
    if (j < 0 || j > k || k + j > cx->dimension())
        fail(ErrorKind::MalformedInput, "swap walk needs 0 <= j <= k and k+j <= d");
    if (j == 0) {
        auto id = identity_walk(cx, k);
        id.set_description("Sdirect:" + std::to_string(k) + ":0");
        return id;
    }
    HDWalk base = canonical_walk(cx, k, j);
    const auto& faces = cx->faces(k);
    const Eigen::Index nk = static_cast<Eigen::Index>(faces.size());
    std::vector<Eigen::Triplet<double>> trips;
    std::vector<double> rowsum(static_cast<std::size_t>(nk), 0.0);
    base.matrix().for_each_entry([&](Eigen::Index r, Eigen::Index c, double v) {
        if (intersection_size(faces[static_cast<std::size_t>(r)],
                              faces[static_cast<std::size_t>(c)]) == k - j) {
            trips.emplace_back(static_cast<int>(r), static_cast<int>(c), v);
            rowsum[static_cast<std::size_t>(r)] += v;
        }
    });
    for (std::size_t r = 0; r < rowsum.size(); ++r)
        if (rowsum[r] <= 0.0)
            fail(ErrorKind::DegenerateRow,
                 "no intersection-(k-j) transition from face " + face_to_string(faces[r]));
    SparseRowMajor m(nk, nk);
    m.setFromTriplets(trips.begin(), trips.end());
    for (int r = 0; r < m.outerSize(); ++r)
        for (SparseRowMajor::InnerIterator it(m, r); it; ++it)
            it.valueRef() /= rowsum[static_cast<std::size_t>(r)];
    WalkMatrix packed = pack_walk_matrix(std::move(m));
    validate_walk_matrix(packed, kClampHdWalk, ErrorKind::NotAWalk);
    // Asymmetry is recorded, not enforced: row renormalization on irregular
    // complexes can break exact reversibility.
    HDWalk walk(cx, k, {}, std::move(packed), true, std::make_pair(k, j));
    walk.set_description("Sdirect:" + std::to_string(k) + ":" + std::to_string(j));
    return walk;
}

HDWalk swap_walk_ajt(const ComplexPtr& cx, int k, int j) {
    if (j < 0 || j > k || k + j > cx->dimension())
        fail(ErrorKind::MalformedInput, "swap walk needs 0 <= j <= k and k+j <= d");
    const double norm = binomial(k, j);
    std::vector<WalkTerm> specs;
    WalkMatrix acc;
    bool first = true;
    for (int i = 0; i <= j; ++i) {
        const double sign = ((j - i) % 2 == 0) ? 1.0 : -1.0;
        const double a = sign * binomial(j, i) * binomial(k + i, i) / norm;
        Word word;
        word.insert(word.end(), static_cast<std::size_t>(i), Step::Up);
        word.insert(word.end(), static_cast<std::size_t>(i), Step::Down);
        PureWalk pw = pure_walk(*cx, k, word);
        specs.push_back({a, pw.word, pw.down_positions});
        if (first) {
            acc = pw.matrix.scaled(a);
            first = false;
        } else {
            acc = acc.plus(pw.matrix, a);
        }
    }
    validate_walk_matrix(acc, kClampSwapAjt, ErrorKind::ConstructionMismatch);
    HDWalk walk(cx, k, std::move(specs), std::move(acc), true, std::make_pair(k, j));
    if (walk.self_adjointness_gap() > kSelfAdjointTol)
        fail(ErrorKind::NotSelfAdjoint, "swap walk combination is not self-adjoint");
    walk.set_description("S:" + std::to_string(k) + ":" + std::to_string(j));
    return walk;
}

HDWalk johnson_swap_walk(const ComplexPtr& cx, int k, int j) {
    if (!cx->is_complete())
        fail(ErrorKind::MalformedInput, "Johnson construction needs a complete complex");
    if (j < 0 || j > k || k > cx->dimension())
        fail(ErrorKind::MalformedInput, "johnson swap walk needs 0 <= j <= k <= d");
    if (j == 0) {
        auto id = identity_walk(cx, k);
        id.set_description("S:" + std::to_string(k) + ":0");
        return id;
    }
    const auto& faces = cx->faces(k);
    const int n = cx->vertex_count();
    const Eigen::Index nk = static_cast<Eigen::Index>(faces.size());
    const double deg = binomial(k, j) * binomial(n - k, j);
    SparseRowMajor m(nk, nk);
    m.reserve(Eigen::VectorXi::Constant(static_cast<int>(nk), static_cast<int>(deg)));
    std::vector<int> all_verts;
    all_verts.reserve(static_cast<std::size_t>(n));
    for (const auto& vf : cx->faces(1)) all_verts.push_back(vf[0]);
    std::vector<int> others;
    others.reserve(static_cast<std::size_t>(n));
    for (Eigen::Index r = 0; r < nk; ++r) {
        const Face& s = faces[static_cast<std::size_t>(r)];
        others.clear();
        std::set_difference(all_verts.begin(), all_verts.end(), s.begin(), s.end(),
                            std::back_inserter(others));
        std::vector<Eigen::Index> cols;
        cols.reserve(static_cast<std::size_t>(deg));
        for_each_subset(s, k - j, [&](const Face& keep) {
            for_each_subset(others, j, [&](const Face& add) {
                cols.push_back(static_cast<Eigen::Index>(*cx->index_of(k, face_union(keep, add))));
            });
        });
        std::sort(cols.begin(), cols.end());
        for (Eigen::Index c : cols) m.insert(r, c) = 1.0 / deg;
    }
    m.makeCompressed();
    WalkMatrix packed = pack_walk_matrix(std::move(m));
    HDWalk walk(cx, k, {}, std::move(packed), true, std::make_pair(k, j));
    walk.set_description("S:" + std::to_string(k) + ":" + std::to_string(j));
    return walk;
}

HDWalk swap_walk(const ComplexPtr& cx, int k, int j) {
    if (j < 0 || j > k)
        fail(ErrorKind::MalformedInput, "swap walk needs 0 <= j <= k");
    if (k + j <= cx->dimension()) return swap_walk_ajt(cx, k, j);
    if (cx->is_complete()) return johnson_swap_walk(cx, k, j);
    fail(ErrorKind::MalformedInput,
         "swap walk with k+j > d is only defined on complete complexes");
}

WeightedGraph walk_graph(const HDWalk& m) {
    const Eigen::VectorXd& pi = m.stationary();
    if (m.matrix().self_adjointness_gap(pi) > 1e-8)
        fail(ErrorKind::NotSelfAdjoint, "walk is not self-adjoint; no underlying graph");
    const Eigen::Index n = m.matrix().rows();
    WeightedGraph g;
    g.vertices = m.complex().faces(m.level());
    g.weights = Eigen::MatrixXd::Zero(n, n);
    m.matrix().for_each_entry([&](Eigen::Index i, Eigen::Index j, double v) {
        g.weights(i, j) = pi[i] * v;
    });
    g.weights = 0.5 * (g.weights + g.weights.transpose()).eval();
    g.vertex_measure = pi;
    return g;
}

double laziness(const HDWalk& m) {
    return m.stationary().dot(m.matrix().diagonal());
}

HDWalk parse_walk_spec(const ComplexPtr& cx, const std::string& spec) {
    auto bad = [&](const std::string& why) -> HDWalk {
        fail(ErrorKind::MalformedInput, "bad walk spec '" + spec + "': " + why);
    };
    auto split = [](const std::string& s, char sep) {
        std::vector<std::string> parts;
        std::size_t start = 0;
        while (true) {
            auto pos = s.find(sep, start);
            parts.push_back(s.substr(start, pos - start));
            if (pos == std::string::npos) break;
            start = pos + 1;
        }
        return parts;
    };
    auto to_int = [&](const std::string& s) {
        try {
            std::size_t used = 0;
            int v = std::stoi(s, &used);
            if (used != s.size()) throw std::invalid_argument(s);
            return v;
        } catch (const std::exception&) {
            fail(ErrorKind::MalformedInput, "bad walk spec '" + spec + "': not an integer: " + s);
        }
    };

    if (spec.rfind("combo:", 0) == 0) {
        const std::string rest = spec.substr(6);
        const auto colon = rest.find(':');
        if (colon == std::string::npos) return bad("expected combo:k:[[alpha,word],...]");
        const int k = to_int(rest.substr(0, colon));
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(rest.substr(colon + 1));
        } catch (const nlohmann::json::exception& e) {
            return bad(std::string("combo JSON: ") + e.what());
        }
        if (!j.is_array() || j.empty()) return bad("combo must be a non-empty array");
        std::vector<std::pair<double, Word>> terms;
        for (const auto& item : j) {
            if (!item.is_array() || item.size() != 2) return bad("combo entries are [alpha, word]");
            terms.emplace_back(item[0].get<double>(),
                               word_from_string(item[1].get<std::string>()));
        }
        auto w = hd_walk(cx, k, terms);
        w.set_description(spec);
        return w;
    }
    if (spec.rfind("UD^", 0) == 0) {
        const auto parts = split(spec.substr(3), ':');
        if (parts.size() != 2) return bad("expected UD^t:k");
        return lower_walk_power(cx, to_int(parts[1]), to_int(parts[0]));
    }
    const auto parts = split(spec, ':');
    if (parts.size() == 2 && parts[0] == "I") return identity_walk(cx, to_int(parts[1]));
    if (parts.size() == 3 && parts[0] == "N")
        return canonical_walk(cx, to_int(parts[1]), to_int(parts[2]));
    if (parts.size() == 3 && parts[0] == "S")
        return swap_walk(cx, to_int(parts[1]), to_int(parts[2]));
    return bad("unknown walk form");
}

} // namespace hdx
