// Command-line front end. Each command parses files and flags, calls the
// library, and serializes the result.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mvinterp/io.hpp"
#include "mvinterp/mvinterp.hpp"

namespace {

using namespace mvinterp;
using io::json;

struct Globals {
    std::uint64_t seed = 0;
    double tol_rank = default_rank_tol;
    std::size_t cap = default_cardinality_cap;
};

struct SetOptions {
    std::size_t m = 2;
    Exponent n = 4;
    std::string p = "2";
    std::string gp = "cheb2";
    bool no_leja = false;
};

DegreeNorm parse_norm(const std::string& s) {
    if (s == "inf" || s == "infinity") return DegreeNorm::infinity();
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != s.size() || !(v >= 1.0)) throw InvalidArgument("degree norm p must be a number >= 1 or 'inf'");
    return {v};
}

const CLI::Validator norm_validator(
    [](std::string& s) -> std::string {
        try {
            parse_norm(s);
            return {};
        } catch (const Error& e) {
            return e.what();
        }
    },
    "NUM|inf", "norm");

void add_set_options(CLI::App* c, SetOptions& o, bool with_n = true) {
    c->add_option("-m,--dim", o.m, "spatial dimension")->check(CLI::Range(1, 64));
    if (with_n) c->add_option("-n,--degree", o.n, "degree n");
    c->add_option("-p,--norm", o.p, "l_p degree norm (number >= 1 or inf)")->check(norm_validator);
    c->add_option("--gp", o.gp, "generating nodes: cheb1, cheb2 or a gp JSON file");
    c->add_flag("--no-leja", o.no_leja, "keep the natural Chebyshev order");
}

std::shared_ptr<const GeneratingNodes> make_gp(const SetOptions& o, Exponent n) {
    if (o.gp == "cheb1" || o.gp == "cheb2")
        return std::make_shared<const GeneratingNodes>(
            make_generating_nodes(o.m, n, o.gp == "cheb1" ? NodeFamily::cheb1 : NodeFamily::cheb2, !o.no_leja));
    auto gp = io::gp_from_json(json::parse(io::read_file(o.gp)));
    if (gp.dim() != o.m) throw DimensionError("gp file has dimension " + std::to_string(gp.dim()));
    return std::make_shared<const GeneratingNodes>(std::move(gp));
}

UnisolventNodes make_nodes(const SetOptions& o, const Globals& g,
                           std::shared_ptr<const GeneratingNodes> gp = nullptr) {
    auto A = std::make_shared<const MultiIndexSet>(build_complete_set(o.m, o.n, parse_norm(o.p), g.cap));
    return UnisolventNodes(A, gp ? gp : make_gp(o, o.n));
}

void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-")
        std::cout << text;
    else
        io::write_file(path, text);
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json vec_json(std::span<const double> v) { return std::vector<double>(v.begin(), v.end()); }

Exponent degree_cap_for(std::size_t m) { return m <= 2 ? 60 : m == 3 ? 30 : 16; }

void check_degree_cap(std::size_t m, Exponent n_max, std::optional<Exponent> override_cap) {
    const Exponent cap = override_cap ? *override_cap : degree_cap_for(m);
    if (n_max > cap)
        throw InvalidArgument("degree " + std::to_string(n_max) + " exceeds the cap " + std::to_string(cap) +
                              " for m=" + std::to_string(m) + " (use --degree-cap to raise it)");
}

std::vector<double> values_for(const UnisolventNodes& nodes, const std::string& values_path,
                               const std::string& fn, const std::string& poly) {
    if (!values_path.empty()) {
        auto t = io::parse_csv(io::read_file(values_path));
        std::vector<double> F;
        for (const auto& r : t.rows) {
            if (r.empty()) continue;
            F.push_back(r.back());
        }
        if (F.size() != nodes.size())
            throw DimensionError("values file has " + std::to_string(F.size()) + " rows, expected " +
                                 std::to_string(nodes.size()));
        return F;
    }
    return sample_at_nodes(nodes, io::function_by_name(fn, nodes.dim(), poly));
}

json dual_json(const DualDecomposition& D) {
    json j;
    j["k"] = D.k;
    j["cardinality"] = D.A->size();
    j["kernel_dimension"] = D.kernel_basis.size();
    j["input_count"] = D.input_count();
    j["P0"] = D.P0;
    j["basis_order"] = D.basis_order;
    j["interp_basis"] = D.interp_basis;
    j["kernel_basis"] = D.kernel_basis;
    return j;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multivariate Newton/Lagrange interpolation on unisolvent nodes"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--seed", g.seed, "random seed (default 0)");
    app.add_option("--tol-rank", g.tol_rank, "relative pivot threshold for rank decisions")
        ->check(CLI::Range(1e-300, 0.999999));
    app.add_option("--cap-cardinality", g.cap, "maximum |A| before refusing to build");

    // interpolate
    SetOptions io_set;
    std::string ip_fn = "runge10", ip_poly, ip_values, ip_out, ip_nodes_out;
    auto* ip = app.add_subcommand("interpolate", "Newton coefficients of the interpolant on P_A");
    add_set_options(ip, io_set);
    ip->add_option("--fn", ip_fn, "runge10 | runge1 | poly");
    ip->add_option("--poly-file", ip_poly, "canonical coefficient CSV for --fn poly");
    ip->add_option("--values", ip_values, "CSV of node values (last column), lex order");
    ip->add_option("-o,--output", ip_out, "coefficient bundle JSON");
    ip->add_option("--nodes-out", ip_nodes_out, "write P_A as CSV");

    // eval
    std::string ev_coeffs, ev_points, ev_out;
    auto* ev = app.add_subcommand("eval", "evaluate a coefficient bundle");
    ev->add_option("--coeffs", ev_coeffs, "coefficient bundle JSON")->required();
    ev->add_option("--points", ev_points, "CSV of points")->required();
    ev->add_option("-o,--output", ev_out, "CSV of values");

    // transform
    SetOptions tr_set;
    std::string tr_cache, tr_out, tr_fn, tr_poly, tr_values;
    auto* tr = app.add_subcommand("transform", "NL, LN, CN, NC for (A, P_A)");
    add_set_options(tr, tr_set);
    tr->add_option("--cache-dir", tr_cache, "directory of cached transform sets keyed by content hash");
    tr->add_option("-o,--output", tr_out, "write the transform set JSON here");
    tr->add_option("--fn", tr_fn, "also report coefficients of this function in every basis");
    tr->add_option("--poly-file", tr_poly, "canonical coefficient CSV for --fn poly");
    tr->add_option("--values", tr_values, "CSV of node values instead of --fn");

    // scattered
    SetOptions sc_set;
    std::string sc_nodes, sc_fn = "runge10", sc_poly, sc_out;
    auto* sc = app.add_subcommand("scattered", "interpolation on arbitrary unisolvent nodes");
    add_set_options(sc, sc_set);
    sc->add_option("--nodes", sc_nodes, "CSV of |A| nodes, optional value column")->required();
    sc->add_option("--fn", sc_fn, "function when the CSV has no value column");
    sc->add_option("--poly-file", sc_poly, "canonical coefficient CSV for --fn poly");
    sc->add_option("-o,--output", sc_out, "result JSON");

    // dual
    SetOptions du_set;
    std::string du_nodes, du_out;
    auto* du = app.add_subcommand("dual", "maximal unisolvent subset and kernel of arbitrary nodes");
    add_set_options(du, du_set);
    du->add_option("--nodes", du_nodes, "CSV of input nodes")->required();
    du->add_option("-o,--output", du_out, "result JSON");

    // variety
    SetOptions va_set;
    va_set.m = 3;
    std::string va_samples, va_fn, va_poly, va_out, va_torus, va_samples_out;
    std::size_t va_count = 0;
    auto* va = app.add_subcommand("variety", "kernel and least-squares fit on sampled variety points");
    add_set_options(va, va_set);
    va->add_option("--samples", va_samples, "CSV of sample points, optional value column");
    va->add_option("--fn", va_fn, "function for the fit when samples carry no values");
    va->add_option("--poly-file", va_poly, "canonical coefficient CSV for --fn poly");
    va->add_option("--torus", va_torus, "R,r: torus reference gp; generates samples if --samples is absent");
    va->add_option("--count", va_count, "generated sample count (default floor(1.5 |A|))");
    va->add_option("--samples-out", va_samples_out, "write generated samples as CSV");
    va->add_option("-o,--output", va_out, "result JSON");

    // lebesgue
    SetOptions le_set;
    std::string le_samples, le_out;
    LebesgueSampling le_opts;
    auto* le = app.add_subcommand("lebesgue", "sampled Lebesgue constant of P_A");
    add_set_options(le, le_set);
    le->add_option("--samples", le_samples, "CSV of sample points (replaces the default layout)");
    le->add_option("--grid", le_opts.grid_per_dim, "tensor grid points per dimension");
    le->add_option("--random", le_opts.random_points, "random points added for m >= 3");
    le->add_option("-o,--output", le_out, "result JSON");

    // bench-runge
    SetOptions br_set;
    Exponent br_lo = 2, br_hi = 40;
    std::optional<Exponent> br_cap, br_fit_lo, br_fit_hi;
    std::string br_fn = "runge10", br_poly, br_out, br_summary;
    std::size_t br_points = 100, br_threads = 0;
    std::vector<std::string> br_compare;
    auto* br = app.add_subcommand("bench-runge", "convergence benchmark with rate fit");
    add_set_options(br, br_set, false);
    br->add_option("--n-min", br_lo, "first degree");
    br->add_option("--n-max", br_hi, "last degree");
    br->add_option("--degree-cap", br_cap, "override the default degree cap");
    br->add_option("--fit-lo", br_fit_lo, "fit range start (default n-min)");
    br->add_option("--fit-hi", br_fit_hi, "fit range end (default n-max)");
    br->add_option("--fn", br_fn, "runge10 | runge1 | poly");
    br->add_option("--poly-file", br_poly, "canonical coefficient CSV for --fn poly");
    br->add_option("--test-points", br_points, "random test points per degree");
    br->add_option("--threads", br_threads, "worker threads (0: all cores)");
    br->add_option("--compare", br_compare, "external CSVs with the same schema")->expected(1, -1);
    br->add_option("-o,--output", br_out, "records CSV");
    br->add_option("--summary", br_summary, "summary JSON (stdout if absent)");

    // bench-perturb
    SetOptions bp_set;
    Exponent bp_lo = 2, bp_hi = 20;
    std::optional<Exponent> bp_cap;
    std::vector<double> bp_nu{0.0, 0.05, 0.25, 0.5, 1.0};
    std::string bp_fn = "runge1", bp_poly, bp_out, bp_summary;
    std::size_t bp_points = 200, bp_threads = 0;
    auto* bp = app.add_subcommand("bench-perturb", "scattered interpolation on perturbed grids");
    add_set_options(bp, bp_set, false);
    bp->add_option("--n-min", bp_lo, "first degree");
    bp->add_option("--n-max", bp_hi, "last degree");
    bp->add_option("--degree-cap", bp_cap, "override the default degree cap");
    bp->add_option("--nu", bp_nu, "perturbation amplitudes in [0,1]")->expected(1, -1);
    bp->add_option("--fn", bp_fn, "runge10 | runge1 | poly");
    bp->add_option("--poly-file", bp_poly, "canonical coefficient CSV for --fn poly");
    bp->add_option("--test-points", bp_points, "random test points per degree");
    bp->add_option("--threads", bp_threads, "worker threads (0: all cores)");
    bp->add_option("-o,--output", bp_out, "records CSV");
    bp->add_option("--summary", bp_summary, "summary JSON (stdout if absent)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*ip) {
            UnisolventNodes nodes = make_nodes(io_set, g);
            NewtonPolynomial Q = divided_differences(nodes, values_for(nodes, ip_values, ip_fn, ip_poly));
            if (!ip_nodes_out.empty()) io::write_file(ip_nodes_out, io::points_to_csv(nodes.coordinates(), nodes.dim()));
            emit(ip_out, dump(io::newton_to_json(Q)));
        } else if (*ev) {
            NewtonPolynomial Q = io::newton_from_json(json::parse(io::read_file(ev_coeffs)));
            auto pts = io::points_from_csv(io::read_file(ev_points), Q.dim());
            std::string s;
            for (double v : eval_newton_batch(Q, pts.points)) s += io::format_double(v) + "\n";
            emit(ev_out, s);
        } else if (*tr) {
            UnisolventNodes nodes = make_nodes(tr_set, g);
            const std::string hash = io::content_hash(nodes.set(), nodes.gp());
            std::optional<TransformSet> T;
            bool cached = false;
            std::filesystem::path cache_file;
            if (!tr_cache.empty()) {
                cache_file = std::filesystem::path(tr_cache) / ("transform-" + hash + ".json");
                if (std::filesystem::exists(cache_file)) {
                    T.emplace(io::transform_from_json(json::parse(io::read_file(cache_file.string()))));
                    cached = true;
                }
            }
            if (!T) T.emplace(nodes);
            const json tj = io::transform_to_json(*T);
            if (!tr_cache.empty() && !cached) {
                std::filesystem::create_directories(tr_cache);
                io::write_file(cache_file.string(), tj.dump() + "\n");
            }
            if (!tr_out.empty()) io::write_file(tr_out, tj.dump() + "\n");
            const Matrix V = vandermonde(T->nodes());
            const auto N = static_cast<Eigen::Index>(nodes.size());
            json s;
            s["schema"] = io::schema_version;
            s["kind"] = "transform_summary";
            s["hash"] = hash;
            s["cardinality"] = nodes.size();
            s["cached"] = cached;
            s["residuals"] = {{"NL_LN", (T->NL() * T->LN() - Matrix::Identity(N, N)).cwiseAbs().maxCoeff()},
                              {"CN_NC", (T->CN() * T->NC() - Matrix::Identity(N, N)).cwiseAbs().maxCoeff()},
                              {"V_NLCN", (V - T->NL() * T->CN()).cwiseAbs().maxCoeff()}};
            if (!tr_fn.empty() || !tr_values.empty()) {
                const std::vector<double> F = values_for(nodes, tr_values, tr_fn, tr_poly);
                Eigen::Map<const Vector> f(F.data(), static_cast<Eigen::Index>(F.size()));
                const Vector cn = T->to_newton(f), cc = T->to_canonical(cn);
                s["lagrange"] = F;
                s["newton"] = vec_json({cn.data(), static_cast<std::size_t>(cn.size())});
                s["canonical"] = vec_json({cc.data(), static_cast<std::size_t>(cc.size())});
            }
            std::cout << dump(s);
        } else if (*sc) {
            UnisolventNodes nodes = make_nodes(sc_set, g);
            TransformSet T(nodes);
            auto table = io::points_from_csv(io::read_file(sc_nodes), nodes.dim());
            ScatteredSystem sys = build_scattered(T, table.points);
            std::vector<double> F = table.values;
            if (F.empty()) {
                const Function f = io::function_by_name(sc_fn, nodes.dim(), sc_poly);
                for (std::size_t i = 0; i < nodes.size(); ++i) F.push_back(f(sys.given_node(i)));
            }
            const std::vector<double> lag = interpolate_scattered(sys, F);
            const double lambda = std::pow(lebesgue_1d_formula(std::max<double>(sc_set.n, 1)),
                                           static_cast<double>(nodes.dim()));
            json j;
            j["schema"] = io::schema_version;
            j["kind"] = "scattered";
            j["s_inf"] = sys.s_inf();
            j["s_n"] = scattered_error_factor(sys, lambda);
            j["condition_estimate"] = sys.condition_estimate();
            j["lagrange"] = lag;
            j["bundle"] = io::newton_to_json(lagrange_to_newton(T.nodes(), lag));
            emit(sc_out, dump(j));
        } else if (*du) {
            UnisolventNodes nodes = make_nodes(du_set, g);
            auto table = io::points_from_csv(io::read_file(du_nodes), nodes.dim());
            DualDecomposition D = dual_decompose(TransformSet(nodes), table.points, g.tol_rank);
            json j{{"schema", io::schema_version}, {"kind", "dual"}};
            j.update(dual_json(D));
            emit(du_out, dump(j));
        } else if (*va) {
            std::optional<std::pair<double, double>> torus;
            if (!va_torus.empty()) {
                double R = 0, r = 0;
                if (std::sscanf(va_torus.c_str(), "%lf,%lf", &R, &r) != 2 || !(R > r && r > 0 && R + r <= 1.0))
                    throw InvalidArgument("--torus expects R,r with 0 < r < R and R + r <= 1");
                torus.emplace(R, r);
            }
            std::shared_ptr<const GeneratingNodes> gp;
            if (torus) {
                if (va_set.m != 3) throw DimensionError("--torus requires m = 3");
                gp = std::make_shared<const GeneratingNodes>(torus_reference_gp(va_set.n, torus->second));
            }
            UnisolventNodes nodes = make_nodes(va_set, g, gp);
            TransformSet T(nodes);
            io::PointTable table;
            if (!va_samples.empty()) {
                table = io::points_from_csv(io::read_file(va_samples), nodes.dim());
            } else if (torus) {
                auto rng = seeded_engine({g.seed});
                const std::size_t count = va_count ? va_count : static_cast<std::size_t>(1.5 * static_cast<double>(nodes.size()));
                table.points = torus_samples(torus->first, torus->second, count, rng);
            } else {
                throw InvalidArgument("variety needs --samples or --torus");
            }
            if (!va_samples_out.empty()) io::write_file(va_samples_out, io::points_to_csv(table.points, nodes.dim()));
            if (table.values.empty() && !va_fn.empty()) {
                const Function f = io::function_by_name(va_fn, nodes.dim(), va_poly);
                for (std::size_t i = 0; i < table.points.size() / nodes.dim(); ++i)
                    table.values.push_back(f(std::span<const double>(table.points).subspan(i * nodes.dim(), nodes.dim())));
            }
            json j{{"schema", io::schema_version}, {"kind", "variety"}};
            std::optional<DualDecomposition> D;
            if (!table.values.empty()) {
                VarietyFit fit = variety_fit(T, table.points, table.values, g.tol_rank);
                j["residual_max"] = fit.residual_max;
                j["residual_rms"] = fit.residual_rms;
                j["lagrange"] = fit.lagrange;
                D.emplace(std::move(fit.decomposition));
            } else {
                D.emplace(dual_decompose(T, table.points, g.tol_rank));
            }
            j.update(dual_json(*D));
            json canon = json::array();
            for (const auto& mu : D->kernel_basis) canon.push_back(normalized_canonical(T, mu));
            j["kernel_canonical"] = std::move(canon);
            if (torus && D->kernel_basis.size() == 1)
                j["torus_coefficient_deviation"] =
                    torus_kernel_deviation(T, D->kernel_basis[0], torus->first, torus->second);
            emit(va_out, dump(j));
        } else if (*le) {
            UnisolventNodes nodes = make_nodes(le_set, g);
            TransformSet T(nodes);
            le_opts.seed = g.seed;
            LebesgueEstimate L = le_samples.empty()
                                     ? lebesgue_estimate(T, le_opts)
                                     : lebesgue_estimate(T, io::points_from_csv(io::read_file(le_samples), nodes.dim()).points, "file");
            json j{{"schema", io::schema_version}, {"kind", "lebesgue"}, {"value", L.value},
                   {"sample_count", L.sample_count}, {"scheme", L.scheme}, {"sampled", true}};
            if (le_set.n >= 1) {
                const double leb = lebesgue_1d_formula(le_set.n);
                j["formula_1d"] = leb;
                j["tensor_bound"] = std::pow(leb, static_cast<double>(nodes.dim()));
            }
            emit(le_out, dump(j));
        } else if (*br) {
            check_degree_cap(br_set.m, br_hi, br_cap);
            if (br_lo > br_hi) throw InvalidArgument("--n-min exceeds --n-max");
            std::vector<Exponent> degrees;
            for (Exponent n = br_lo; n <= br_hi; ++n) degrees.push_back(n);
            ConvergenceOptions o;
            o.family = br_set.gp == "cheb1" ? NodeFamily::cheb1 : NodeFamily::cheb2;
            if (br_set.gp != "cheb1" && br_set.gp != "cheb2") throw InvalidArgument("benchmarks accept --gp cheb1 or cheb2");
            o.leja = !br_set.no_leja;
            o.test_points = br_points;
            o.seed = g.seed;
            o.cardinality_cap = g.cap;
            o.threads = br_threads;
            const DegreeNorm p = parse_norm(br_set.p);
            auto recs = run_convergence(io::function_by_name(br_fn, br_set.m, br_poly), br_set.m, p, degrees, o);
            if (!br_out.empty()) io::write_file(br_out, io::bench_to_csv(recs));
            json s{{"schema", io::schema_version}, {"kind", "bench_runge"}, {"m", br_set.m},
                   {"p", io::degree_norm_to_json(p)}, {"function", br_fn}, {"seed", g.seed}};
            try {
                s["fit"] = io::rate_fit_to_json(fit_rate(recs, br_fit_lo.value_or(br_lo), br_fit_hi.value_or(br_hi)));
            } catch (const InvalidArgument& e) {
                s["fit"] = nullptr;
                s["fit_error"] = e.what();
            }
            json rows = json::array();
            for (const auto& r : recs)
                rows.push_back({{"n", r.n}, {"cardinality", r.cardinality}, {"max_error", r.max_error}});
            s["records"] = std::move(rows);
            if (!br_compare.empty()) {
                json table = json::array();
                std::vector<std::map<Exponent, double>> ext;
                for (const auto& path : br_compare) {
                    std::map<Exponent, double> byn;
                    for (const auto& r : io::bench_from_csv(io::read_file(path))) byn[r.n] = r.max_error;
                    ext.push_back(std::move(byn));
                }
                for (const auto& r : recs) {
                    json row{{"n", r.n}, {"this", r.max_error}};
                    for (std::size_t i = 0; i < ext.size(); ++i) {
                        auto it = ext[i].find(r.n);
                        row[std::filesystem::path(br_compare[i]).stem().string()] =
                            it == ext[i].end() ? json(nullptr) : json(it->second);
                    }
                    table.push_back(std::move(row));
                }
                s["compare"] = std::move(table);
            }
            emit(br_summary, dump(s));
        } else if (*bp) {
            check_degree_cap(bp_set.m, bp_hi, bp_cap);
            if (bp_lo > bp_hi) throw InvalidArgument("--n-min exceeds --n-max");
            std::vector<Exponent> degrees;
            for (Exponent n = bp_lo; n <= bp_hi; ++n) degrees.push_back(n);
            PerturbationOptions o;
            o.test_points = bp_points;
            o.seed = g.seed;
            o.threads = bp_threads;
            if (bp_set.gp != "cheb1" && bp_set.gp != "cheb2") throw InvalidArgument("benchmarks accept --gp cheb1 or cheb2");
            o.family = bp_set.gp == "cheb1" ? NodeFamily::cheb1 : NodeFamily::cheb2;
            const DegreeNorm p = parse_norm(bp_set.p);
            auto rows = run_perturbation_study(io::function_by_name(bp_fn, bp_set.m, bp_poly), bp_set.m, p, degrees,
                                               bp_nu, o);
            std::string csv = "m,n,p,nu,cardinality,ap,ap0,s_inf,s_n,est,rejected,failed,seed\n";
            json arr = json::array();
            for (const auto& r : rows) {
                csv += std::to_string(bp_set.m) + "," + std::to_string(r.n) + "," + p.to_string() + "," +
                       io::format_double(r.amplitude) + "," + std::to_string(r.cardinality) + "," +
                       io::format_double(r.ap) + "," + io::format_double(r.ap0) + "," + io::format_double(r.s_inf) +
                       "," + io::format_double(r.s_n) + "," + io::format_double(r.est) + "," +
                       std::to_string(r.rejected) + "," + (r.failed ? "1" : "0") + "," + std::to_string(g.seed) + "\n";
                arr.push_back({{"n", r.n}, {"nu", r.amplitude}, {"ap", r.ap}, {"est", r.est}, {"s_inf", r.s_inf},
                               {"rejected", r.rejected}, {"failed", r.failed}});
            }
            if (!bp_out.empty()) io::write_file(bp_out, csv);
            emit(bp_summary, dump(json{{"schema", io::schema_version}, {"kind", "bench_perturb"}, {"m", bp_set.m},
                                       {"p", io::degree_norm_to_json(p)}, {"seed", g.seed}, {"rows", arr}}));
        }
    } catch (const Error& e) {
        std::cerr << json{{"error", e.kind()}, {"message", e.what()}}.dump() << "\n";
        return 1;
    } catch (const json::exception& e) {
        std::cerr << json{{"error", "invalid_input"}, {"message", e.what()}}.dump() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << json{{"error", "failure"}, {"message", e.what()}}.dump() << "\n";
        return 1;
    }
    return 0;
}
