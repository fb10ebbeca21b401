#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "hdx/complex.hpp"
#include "hdx/decomposition.hpp"
#include "hdx/error.hpp"
#include "hdx/expansion.hpp"
#include "hdx/graph.hpp"
#include "hdx/strips.hpp"
#include "hdx/unique_games.hpp"
#include "hdx/walks.hpp"

namespace {

using nlohmann::json;

void write_atomic(const std::filesystem::path& path, const std::string& body) {
    const auto tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out << body;
    }
    std::filesystem::rename(tmp, path);
}

void emit(const std::optional<std::string>& out_path, const std::string& body) {
    if (out_path) write_atomic(*out_path, body);
    else std::cout << body << "\n";
}

hdx::ComplexPtr load(const std::string& path) {
    return std::make_shared<hdx::Complex>(hdx::load_complex(path));
}

json config_json(const std::string& command, const json& fields) {
    json j = fields;
    j["command"] = command;
    return j;
}

int run_complex(const std::vector<int>& complete, const std::vector<int>& punctured,
                const std::vector<double>& sparsify, std::optional<std::uint64_t> seed,
                bool with_gamma, const std::optional<std::string>& gamma_out,
                const std::string& out) {
    hdx::Complex cx = [&] {
        if (!complete.empty()) return hdx::complete_complex(complete[0], complete[1]);
        if (!punctured.empty()) return hdx::punctured_complete_complex(punctured[0]);
        if (!seed) hdx::fail(hdx::ErrorKind::MalformedInput, "--sparsify requires --seed");
        return hdx::sparsified_complex(static_cast<int>(sparsify[0]),
                                       static_cast<int>(sparsify[1]), sparsify[2], *seed);
    }();
    hdx::save_complex(cx, out);
    std::cout << "wrote " << out << "\n";
    std::cout << "level sizes:";
    for (int i = 0; i <= cx.dimension(); ++i) std::cout << " |X(" << i << ")|=" << cx.level_size(i);
    std::cout << "\n";
    if (with_gamma || gamma_out) {
        auto rep = hdx::gamma(cx);
        std::cout << "gamma = " << rep.gamma << " at link " << hdx::face_to_string(rep.argmax_face)
                  << "\n";
        if (gamma_out) write_atomic(*gamma_out, rep.to_json());
    }
    return 0;
}

int run_spectrum(const std::string& complex_path, const std::string& walk_spec,
                 const std::vector<double>& deltas, std::optional<double> tol,
                 const std::optional<std::string>& out,
                 const std::optional<std::string>& plot_data) {
    auto cx = load(complex_path);
    hdx::HDWalk walk = hdx::parse_walk_spec(cx, walk_spec);
    hdx::StripReport rep = hdx::stripping_report(walk);
    if (tol) rep.pass = rep.max_deviation <= *tol;
    json j = json::parse(rep.to_json());
    if (tol) j["pass"] = rep.pass;
    j["config"] = config_json("spectrum", {{"complex", complex_path},
                                           {"walk", walk_spec},
                                           {"deltas", deltas},
                                           {"tol", tol ? json(*tol) : json()}});
    json ranks = json::array();
    for (double d : deltas) {
        auto r = hdx::st_rank(walk, d);
        ranks.push_back({{"delta", d},
                         {"rank_predicted", r.rank_predicted},
                         {"rank_empirical", r.rank_empirical}});
    }
    j["st_rank"] = std::move(ranks);
    emit(out, j.dump(2));
    if (plot_data) {
        std::string series;
        for (Eigen::Index i = 0; i < rep.spectrum.size(); ++i)
            series += std::to_string(i) + "\t" + std::to_string(rep.spectrum[i]) + "\n";
        write_atomic(*plot_data, series);
    }
    return rep.pass ? 0 : 1;
}

int run_expansion(const std::string& complex_path, const std::string& walk_spec, bool links,
                  const std::optional<std::string>& set_file, const std::vector<int>& bm,
                  std::optional<int> planted, std::optional<std::uint64_t> seed,
                  const std::optional<std::string>& out, const std::optional<std::string>& csv,
                  double delta) {
    auto cx = load(complex_path);
    hdx::HDWalk walk = hdx::parse_walk_spec(cx, walk_spec);
    json j;
    j["config"] = config_json("expansion", {{"complex", complex_path},
                                            {"walk", walk_spec},
                                            {"delta", delta}});
    if (links) {
        auto prof = hdx::link_expansion_profile(walk);
        json body = json::parse(prof.to_json());
        j.update(body);
        if (csv) write_atomic(*csv, prof.to_csv());
    } else if (set_file) {
        std::ifstream in(*set_file);
        if (!in) hdx::fail(hdx::ErrorKind::MalformedInput, "cannot open " + *set_file);
        json sj = json::parse(in, nullptr, true);
        const auto faces = sj.at("faces").get<std::vector<hdx::Face>>();
        const Eigen::VectorXd ind = hdx::indicator(*cx, walk.level(), faces);
        auto rec = hdx::expansion(walk, ind);
        j.update(json::parse(rec.to_json()));
        const Eigen::VectorXd eps = hdx::ell2_profile(*cx, walk.level(), ind, walk.level());
        j["epsilons"] = std::vector<double>(eps.data(), eps.data() + eps.size());
        if (walk.is_complete()) {
            auto bound = hdx::expansion_lower_bound(walk, ind, delta);
            j["bound_c0"] = bound.bound_c0;
            j["bound_r"] = bound.r;
        }
        auto search = hdx::nonexpansion_link_search(walk, ind, delta);
        json lv = json::array();
        for (const auto& l : search.levels)
            lv.push_back({{"level", l.level},
                          {"face", l.best_face},
                          {"local_density", l.local_density},
                          {"excess", l.excess}});
        j["link_search"] = std::move(lv);
    } else if (!bm.empty()) {
        auto fx = hdx::tightness_fixture_Bm(cx, bm[0], walk.level(), bm[1]);
        j["exact_phi"] = fx.exact_phi;
        j["measured_phi"] = fx.measured_phi;
        j["set_size"] = fx.set.size();
        j["eps_measured"] =
            std::vector<double>(fx.eps_measured.data(), fx.eps_measured.data() + fx.eps_measured.size());
        j["eps_formula"] =
            std::vector<double>(fx.eps_formula.data(), fx.eps_formula.data() + fx.eps_formula.size());
    } else if (planted) {
        // plant a union of seeded 1-links, then recover them by link search
        if (!seed) hdx::fail(hdx::ErrorKind::MalformedInput, "--planted-search requires --seed");
        const auto& verts = cx->faces(1);
        std::mt19937_64 rng(*seed);
        Eigen::VectorXd ind =
            Eigen::VectorXd::Zero(static_cast<Eigen::Index>(cx->level_size(walk.level())));
        json chosen = json::array();
        for (int c = 0; c < *planted; ++c) {
            const auto& v = verts[static_cast<std::size_t>(
                (static_cast<unsigned __int128>(rng()) * verts.size()) >> 64)];
            chosen.push_back(v);
            ind = ind.cwiseMax(hdx::link_indicator(*cx, walk.level(), v));
        }
        j["planted_links"] = std::move(chosen);
        auto rec = hdx::expansion(walk, ind);
        j.update(json::parse(rec.to_json()));
        auto search = hdx::nonexpansion_link_search(walk, ind, delta);
        json lv = json::array();
        for (const auto& l : search.levels)
            lv.push_back({{"level", l.level},
                          {"face", l.best_face},
                          {"local_density", l.local_density},
                          {"excess", l.excess}});
        j["link_search"] = std::move(lv);
    } else {
        hdx::fail(hdx::ErrorKind::MalformedInput,
                  "choose one of --links, --set-file, --bm, --planted-search");
    }
    emit(out, j.dump(2));
    return 0;
}

int run_ug(const std::string& complex_path, const std::string& walk_spec, int m, double eps,
           std::uint64_t seed, const std::optional<std::string>& out,
           std::optional<int> r_override) {
    auto cx = load(complex_path);
    hdx::HDWalk walk = hdx::parse_walk_spec(cx, walk_spec);
    auto planted = hdx::plant_instance(walk, m, eps, seed);
    auto fallback = hdx::expander_fallback_check(planted.instance.walk());
    auto result = hdx::iterated_link_rounding(planted.instance, eps, seed, r_override);
    json j = json::parse(result.to_json());
    j["config"] = config_json("ug", {{"complex", complex_path},
                                     {"walk", walk_spec},
                                     {"m", m},
                                     {"eps", eps},
                                     {"seed", seed}});
    j["planted_value"] = hdx::value(planted.instance, planted.ground_truth);
    j["corrupted_weight"] = planted.corrupted_weight;
    j["fallback"] = json::parse(fallback.to_json());
    emit(out, j.dump(2));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"weighted simplicial complexes, higher-order walks, and their spectra"};
    app.require_subcommand(1);

    // complex
    auto* c = app.add_subcommand("complex", "build a complex and write it to JSON");
    std::vector<int> complete, punctured_arg;
    std::vector<double> sparsify;
    std::optional<std::uint64_t> seed_c;
    bool with_gamma = false;
    std::optional<std::string> gamma_out;
    std::string out_c;
    auto* g1 = c->add_option("--complete", complete, "n d")->expected(2);
    auto* g2 = c->add_option("--punctured", punctured_arg, "n")->expected(1);
    auto* g3 = c->add_option("--sparsify", sparsify, "n d p")->expected(3);
    c->add_option("--seed", seed_c, "rng seed (required for --sparsify)");
    c->add_flag("--gamma", with_gamma, "also sweep links and print gamma");
    c->add_option("--gamma-out", gamma_out, "write the per-link gamma report as JSON");
    c->add_option("-o,--out", out_c, "output path")->required();
    g1->excludes(g2)->excludes(g3);
    g2->excludes(g3);

    // spectrum
    auto* s = app.add_subcommand("spectrum", "strip report and ST-rank for a walk");
    std::string cx_s, walk_s;
    std::vector<double> deltas;
    std::optional<double> tol_s;
    std::optional<std::string> out_s, plot_s;
    s->add_option("complex", cx_s, "complex JSON file")->required();
    s->add_option("walk", walk_s, "walk spec, e.g. N:3:1, S:2:1, UD^2:3")->required();
    s->add_option("--delta", deltas, "ST-rank thresholds (repeatable)");
    s->add_option("--tol", tol_s, "override the strip pass threshold (default: measured Zhang bound)");
    s->add_option("-o,--out", out_s, "report path (stdout otherwise)");
    s->add_option("--plot-data", plot_s, "write eigenvalue series for plotting");

    // expansion
    auto* e = app.add_subcommand("expansion", "edge expansion analyses");
    std::string cx_e, walk_e;
    bool links = false;
    std::optional<std::string> set_file, out_e, csv_e;
    std::vector<int> bm;
    std::optional<int> planted_e;
    std::optional<std::uint64_t> seed_e;
    double delta_e = 0.1;
    e->add_option("complex", cx_e, "complex JSON file")->required();
    e->add_option("walk", walk_e, "walk spec")->required();
    e->add_flag("--links", links, "expansion of every link at every level");
    e->add_option("--set-file", set_file, "JSON file {\"faces\": [[..],..]}");
    e->add_option("--bm", bm, "m t: block-set tightness fixture")->expected(2);
    e->add_option("--planted-search", planted_e, "plant a union of this many 1-links and search");
    e->add_option("--seed", seed_e, "rng seed (required for --planted-search)");
    e->add_option("--delta", delta_e, "threshold for bounds and link search");
    e->add_option("-o,--out", out_e, "report path");
    e->add_option("--csv", csv_e, "CSV table path (with --links)");

    // ug
    auto* u = app.add_subcommand("ug", "plant and round an affine unique game");
    std::string cx_u, walk_u;
    int m_u = 2;
    double eps_u = 0.0;
    std::optional<std::uint64_t> seed_u;
    std::optional<std::string> out_u;
    std::optional<int> r_override;
    u->add_option("complex", cx_u, "complex JSON file")->required();
    u->add_option("walk", walk_u, "walk spec")->required();
    u->add_option("--m", m_u, "alphabet size")->required();
    u->add_option("--eps", eps_u, "corruption weight");
    u->add_option("--seed", seed_u, "rng seed")->required();
    u->add_option("--r", r_override, "override the link level used for rounding");
    u->add_option("-o,--out", out_u, "report path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& help) {
        return app.exit(help);
    } catch (const CLI::ParseError& err) {
        app.exit(err);
        return 2;
    }

    try {
        if (app.got_subcommand(c)) {
            if (complete.empty() && punctured_arg.empty() && sparsify.empty())
                hdx::fail(hdx::ErrorKind::MalformedInput,
                          "choose one of --complete, --punctured, --sparsify");
            return run_complex(complete, punctured_arg, sparsify, seed_c, with_gamma, gamma_out, out_c);
        }
        if (app.got_subcommand(s)) return run_spectrum(cx_s, walk_s, deltas, tol_s, out_s, plot_s);
        if (app.got_subcommand(e))
            return run_expansion(cx_e, walk_e, links, set_file, bm, planted_e, seed_e, out_e, csv_e,
                                 delta_e);
        if (app.got_subcommand(u)) {
            if (m_u < 1) hdx::fail(hdx::ErrorKind::MalformedInput, "alphabet size must be >= 1");
            return run_ug(cx_u, walk_u, m_u, eps_u, *seed_u, out_u, r_override);
        }
    } catch (const hdx::Error& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 2;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 2;
    }
    return 2;
}
