#include <gtest/gtest.h>
#include <sys/wait.h>

#include <filesystem>
#include <random>

#include "helpers.hpp"
#include "mvinterp/io.hpp"

using namespace mvinterp;
namespace fs = std::filesystem;
using io::json;

namespace {

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        dir_ = fs::temp_directory_path() / (std::string("mvinterp_cli_") + info->name() + "_" + std::to_string(::getpid()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    /// Runs the CLI; stdout and stderr land in out_ and err_.
    int run(const std::string& args) {
        const std::string cmd = std::string("\"") + MVINTERP_CLI + "\" " + args + " > \"" + path("stdout") + "\" 2> \"" +
                                path("stderr") + "\"";
        const int status = std::system(cmd.c_str());
        out_ = io::read_file(path("stdout"));
        err_ = io::read_file(path("stderr"));
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    }

    json read_json(const std::string& name) const { return json::parse(io::read_file(path(name))); }

    fs::path dir_;
    std::string out_, err_;
};

UnisolventNodes nodes(std::size_t m, Exponent n, double p) { return testing_support::nodes_for(m, n, p); }

}  // namespace

TEST_F(Cli, InterpolateIsDeterministicAndMatchesLibrary) {
    ASSERT_EQ(run("interpolate -m 2 -n 6 -p 2 --fn runge10 -o " + path("a.json") + " --nodes-out " + path("p.csv")), 0)
        << err_;
    ASSERT_EQ(run("interpolate -m 2 -n 6 -p 2 --fn runge10 -o " + path("b.json")), 0) << err_;
    EXPECT_EQ(io::read_file(path("a.json")), io::read_file(path("b.json")));

    const auto Q = io::newton_from_json(read_json("a.json"));
    const auto P = nodes(2, 6, 2.0);
    const auto ref = divided_differences(P, sample_at_nodes(P, [](std::span<const double> x) { return runge(x, 10.0); }));
    ASSERT_EQ(Q.coefficients().size(), ref.coefficients().size());
    for (std::size_t i = 0; i < ref.coefficients().size(); ++i) EXPECT_EQ(Q.coefficients()[i], ref.coefficients()[i]);
    const auto pts = io::points_from_csv(io::read_file(path("p.csv")), 2).points;
    EXPECT_EQ(pts, std::vector<double>(P.coordinates().begin(), P.coordinates().end()));
}

TEST_F(Cli, EvalReproducesLibraryValues) {
    ASSERT_EQ(run("interpolate -m 3 -n 4 -p inf --fn runge1 -o " + path("q.json")), 0) << err_;
    const auto flat = oracle::flatten(oracle::random_points(3, 25, 4));
    io::write_file(path("x.csv"), io::points_to_csv(flat, 3));
    ASSERT_EQ(run("eval --coeffs " + path("q.json") + " --points " + path("x.csv") + " -o " + path("v.csv")), 0) << err_;
    const auto vals = io::parse_csv(io::read_file(path("v.csv")));
    const auto Q = io::newton_from_json(read_json("q.json"));
    const auto expect = eval_newton_batch(Q, flat);
    ASSERT_EQ(vals.rows.size(), expect.size());
    for (std::size_t i = 0; i < expect.size(); ++i) EXPECT_EQ(vals.rows[i].back(), expect[i]);
}

TEST_F(Cli, PolynomialFileIsReproducedExactly) {
    io::write_file(path("poly.csv"), "2,0,1.5\n1,1,-0.5\n0,0,2\n");
    ASSERT_EQ(run("interpolate -m 2 -n 2 -p 1 --fn poly --poly-file " + path("poly.csv") + " -o " + path("q.json")), 0)
        << err_;
    const auto Q = io::newton_from_json(read_json("q.json"));
    for (const auto& x : oracle::random_points(2, 10, 2))
        EXPECT_NEAR(Q(x), 1.5 * x[0] * x[0] - 0.5 * x[0] * x[1] + 2.0, 1e-13);
}

TEST_F(Cli, TransformCacheIsWrittenAndReused) {
    const std::string args = "transform -m 2 -n 5 -p 2 --fn runge1 --cache-dir " + path("cache");
    ASSERT_EQ(run(args), 0) << err_;
    const auto first = json::parse(out_);
    std::size_t files = 0;
    for (const auto& e : fs::directory_iterator(path("cache"))) {
        ++files;
        EXPECT_EQ(e.path().filename().string().rfind("transform-", 0), 0u);
    }
    EXPECT_EQ(files, 1u);
    ASSERT_EQ(run(args), 0) << err_;
    auto second = json::parse(out_);
    EXPECT_FALSE(first.at("cached").get<bool>());
    EXPECT_TRUE(second.at("cached").get<bool>());
    second["cached"] = false;
    EXPECT_EQ(second, first);
}

TEST_F(Cli, ScatteredMatchesLibrary) {
    const auto P = nodes(2, 5, 2.0);
    std::mt19937_64 rng(3);
    const auto given = perturb_nodes(P, 0.3, rng);
    io::write_file(path("g.csv"), io::points_to_csv(given, 2));
    ASSERT_EQ(run("scattered -m 2 -n 5 -p 2 --fn runge1 --nodes " + path("g.csv") + " -o " + path("s.json")), 0)
        << err_;
    const auto j = read_json("s.json");
    const auto sys = build_scattered(P, given);
    std::vector<double> F(P.size());
    for (std::size_t i = 0; i < F.size(); ++i) F[i] = runge(sys.given_node(i), 1.0);
    const auto lag = interpolate_scattered(sys, F);
    const auto got = j.at("lagrange").get<std::vector<double>>();
    ASSERT_EQ(got.size(), lag.size());
    for (std::size_t i = 0; i < lag.size(); ++i) EXPECT_EQ(got[i], lag[i]);
    EXPECT_EQ(j.at("s_inf").get<double>(), sys.s_inf());
}

TEST_F(Cli, DualFindsLineDimension) {
    std::vector<double> pts;
    for (int i = 0; i < 20; ++i) {
        const double t = -1.0 + 0.1 * i;
        pts.insert(pts.end(), {t, -t});
    }
    io::write_file(path("line.csv"), io::points_to_csv(pts, 2));
    ASSERT_EQ(run("dual -m 2 -n 4 -p 1 --nodes " + path("line.csv")), 0) << err_;
    const auto j = json::parse(out_);
    EXPECT_EQ(j.at("k").get<std::size_t>(), 5u);
    EXPECT_EQ(j.at("kernel_dimension").get<std::size_t>(), 10u);
}

TEST_F(Cli, VarietyOnTorusHasOneDimensionalKernel) {
    ASSERT_EQ(run("variety -m 3 -n 4 -p 2 --torus 0.7,0.3 --fn runge1 --samples-out " + path("torus.csv")), 0) << err_;
    auto j = json::parse(out_);
    EXPECT_EQ(j.at("kernel_dimension").get<std::size_t>(), 1u);
    EXPECT_LE(j.at("torus_coefficient_deviation").get<double>(), 1e-6);
    const auto samples = io::points_from_csv(io::read_file(path("torus.csv")), 3).points;
    EXPECT_EQ(samples.size(), 3u * (54u * 3 / 2));
    // Feeding the written samples back gives the same kernel.
    ASSERT_EQ(run("variety -m 3 -n 4 -p 2 --torus 0.7,0.3 --fn runge1 --samples " + path("torus.csv")), 0) << err_;
    EXPECT_EQ(json::parse(out_).at("kernel_dimension").get<std::size_t>(), 1u);
}

TEST_F(Cli, BenchRungeMatchesLibraryRecords) {
    ASSERT_EQ(run("--seed 4 bench-runge -m 2 -p 2 --n-min 2 --n-max 12 -o " + path("b.csv") + " --summary " +
                  path("s.json")),
              0)
        << err_;
    const auto recs = io::bench_from_csv(io::read_file(path("b.csv")));
    std::vector<Exponent> ns;
    for (Exponent n = 2; n <= 12; ++n) ns.push_back(n);
    ConvergenceOptions o;
    o.seed = 4;
    const auto lib = run_convergence([](std::span<const double> x) { return runge(x, 10.0); }, 2, DegreeNorm{2.0}, ns, o);
    ASSERT_EQ(recs.size(), lib.size());
    for (std::size_t i = 0; i < lib.size(); ++i) {
        EXPECT_EQ(recs[i].n, lib[i].n);
        EXPECT_EQ(recs[i].max_error, lib[i].max_error);
        EXPECT_EQ(recs[i].seed, 4u);
    }
    const auto s = read_json("s.json");
    EXPECT_NEAR(s.at("fit").at("rho").get<double>(), fit_rate(lib, 2, 12).rho, 1e-12);
}

TEST_F(Cli, BenchPerturbWritesRecords) {
    ASSERT_EQ(run("bench-perturb -m 2 -p 2 --n-min 2 --n-max 4 --nu 0 0.25 -o " + path("p.csv")), 0) << err_;
    const auto t = io::parse_csv(io::read_file(path("p.csv")));
    EXPECT_EQ(t.header.front(), "m");
    EXPECT_EQ(t.rows.size(), 6u);
}

TEST_F(Cli, DegreeCapRefusesLargeRuns) {
    EXPECT_EQ(run("bench-runge -m 3 -p 2 --n-min 2 --n-max 31"), 1);
    EXPECT_EQ(json::parse(err_).at("error").get<std::string>(), "invalid_argument");
}

TEST_F(Cli, ExitCodes) {
    EXPECT_EQ(run("interpolate -m 2 -n 3 -p 0.5 --fn runge1"), 2);
    EXPECT_EQ(run("no-such-command"), 2);
    EXPECT_EQ(run(""), 2);
    EXPECT_EQ(run("interpolate -m 2 -n 3 --fn sine"), 1);
    const auto e = json::parse(err_);
    EXPECT_EQ(e.at("error").get<std::string>(), "invalid_argument");
    EXPECT_FALSE(e.at("message").get<std::string>().empty());
    EXPECT_EQ(run("eval --coeffs " + path("missing.json") + " --points " + path("missing.csv")), 1);
    io::write_file(path("bad.csv"), "0.1,0.2,0.3\n");
    EXPECT_EQ(run("scattered -m 2 -n 1 -p 1 --fn runge1 --nodes " + path("bad.csv")), 1);
    EXPECT_EQ(json::parse(err_).at("error").get<std::string>(), "dimension_mismatch");
}

TEST_F(Cli, DuplicateScatteredNodesAreReportedSingular) {
    io::write_file(path("dup.csv"), "1,1\n1,1\n-1,1\n");
    EXPECT_EQ(run("scattered -m 2 -n 1 -p 1 --fn runge1 --nodes " + path("dup.csv")), 1);
    EXPECT_EQ(json::parse(err_).at("error").get<std::string>(), "singular_system");
}
