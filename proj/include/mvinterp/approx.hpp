#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <map>
#include <mutex>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "mvinterp/error.hpp"
#include "mvinterp/multiindex.hpp"
#include "mvinterp/newton.hpp"
#include "mvinterp/nodes.hpp"
#include "mvinterp/scattered.hpp"
#include "mvinterp/transform.hpp"

namespace mvinterp {

using Function = std::function<double(std::span<const double>)>;

inline double runge(std::span<const double> x, double scale) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return 1.0 / (1.0 + scale * s);
}

/// sum_alpha c_alpha x^alpha over an explicit term list.
class CanonicalPolynomial {
public:
    CanonicalPolynomial(std::size_t m, std::vector<std::pair<MultiIndex, double>> terms)
        : m_(m), terms_(std::move(terms)) {
        for (const auto& [a, c] : terms_)
            if (a.dim() != m_) throw DimensionError("canonical polynomial: term dimension mismatch");
    }
    std::size_t dim() const noexcept { return m_; }
    const std::vector<std::pair<MultiIndex, double>>& terms() const noexcept { return terms_; }

    double operator()(std::span<const double> x) const {
        if (x.size() != m_) throw DimensionError("canonical polynomial: point dimension mismatch");
        double s = 0.0;
        for (const auto& [a, c] : terms_) {
            double t = c;
            for (std::size_t d = 0; d < m_; ++d)
                for (Exponent k = 0; k < a[d]; ++k) t *= x[d];
            s += t;
        }
        return s;
    }

private:
    std::size_t m_;
    std::vector<std::pair<MultiIndex, double>> terms_;
};

/// (2/pi)(log n + gamma + log(8/pi)).
inline double lebesgue_1d_formula(double n) {
    if (!(n >= 1.0)) throw InvalidArgument("lebesgue_1d_formula: n must be >= 1");
    constexpr double gamma = 0.5772156649;
    return 2.0 / std::numbers::pi * (std::log(n) + gamma + std::log(8.0 / std::numbers::pi));
}

struct LebesgueEstimate {
    double value = 0.0;
    std::size_t sample_count = 0;
    std::string scheme;
};

/// Points uniform in [-1,1]^m, row by row.
template <class Rng>
std::vector<double> uniform_points(std::size_t m, std::size_t count, Rng& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> out(m * count);
    for (double& x : out) x = u(rng);
    return out;
}

/// Seeded engine for a (seed, tag...) pair; used for every benchmark stream.
inline std::mt19937_64 seeded_engine(std::initializer_list<std::uint64_t> key) {
    std::vector<std::uint32_t> words;
    for (std::uint64_t k : key) {
        words.push_back(static_cast<std::uint32_t>(k));
        words.push_back(static_cast<std::uint32_t>(k >> 32));
    }
    std::seed_seq seq(words.begin(), words.end());
    return std::mt19937_64(seq);
}

struct LebesgueSampling {
    std::size_t grid_per_dim = 33;
    std::size_t grid_cap = 40000;  // per-dim count shrinks until the grid fits
    std::size_t random_points = 10000;
    std::size_t random_from_dim = 3;
    std::uint64_t seed = 0;
};

/// Interpolation nodes, then a tensor grid (33 per dimension unless capped),
/// then seeded uniform points for m >= 3.
inline std::vector<double> lebesgue_samples(const UnisolventNodes& nodes, const LebesgueSampling& s = {}) {
    const std::size_t m = nodes.dim();
    std::vector<double> out(nodes.coordinates().begin(), nodes.coordinates().end());
    std::size_t g = std::max<std::size_t>(s.grid_per_dim, 2);
    while (g > 2 && std::pow(static_cast<double>(g), static_cast<double>(m)) > static_cast<double>(s.grid_cap)) --g;
    std::size_t total = 1;
    for (std::size_t d = 0; d < m; ++d) total *= g;
    std::vector<std::size_t> idx(m, 0);
    for (std::size_t t = 0; t < total; ++t) {
        for (std::size_t d = 0; d < m; ++d)
            out.push_back(-1.0 + 2.0 * static_cast<double>(idx[d]) / static_cast<double>(g - 1));
        for (std::size_t d = 0; d < m && ++idx[d] == g; ++d) idx[d] = 0;
    }
    if (m >= s.random_from_dim) {
        auto rng = seeded_engine({s.seed, 0x1eb});
        auto r = uniform_points(m, s.random_points, rng);
        out.insert(out.end(), r.begin(), r.end());
    }
    return out;
}

/// max over samples of sum_alpha |L_alpha(x)|, in blocks of Newton basis rows
/// times LN.
inline LebesgueEstimate lebesgue_estimate(const TransformSet& T, std::span<const double> samples,
                                          std::string scheme = "custom") {
    const std::size_t m = T.set().dim();
    if (samples.empty()) throw InvalidArgument("lebesgue_estimate: empty sample set");
    if (samples.size() % m != 0) throw DimensionError("lebesgue_estimate: coordinate count not a multiple of m");
    const std::size_t count = samples.size() / m, block = 256;
    double best = 0.0;
    for (std::size_t at = 0; at < count; at += block) {
        const std::size_t len = std::min(block, count - at);
        Matrix Nb = newton_basis_matrix(T.set(), T.nodes().gp(), samples.subspan(at * m, len * m));
        Matrix L = Nb * T.LN();
        best = std::max(best, L.cwiseAbs().rowwise().sum().maxCoeff());
    }
    return {best, count, std::move(scheme)};
}

inline LebesgueEstimate lebesgue_estimate(const TransformSet& T, const LebesgueSampling& s = {}) {
    return lebesgue_estimate(T, lebesgue_samples(T.nodes(), s), "nodes+grid+random");
}

/// sup over [-1,1] of prod_{j<k} |t - p_j|: 4096 equispaced samples including
/// the endpoints, inflated by 1e-3.
inline double newton_sup_1d(std::span<const double> p, Exponent k) {
    if (p.size() < k) throw CoverageError("newton_sup_1d: not enough generating values");
    if (k == 0) return 1.0;
    constexpr int samples = 4096;
    double best = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double t = -1.0 + 2.0 * i / (samples - 1);
        double v = 1.0;
        for (Exponent j = 0; j < k; ++j) v *= std::abs(t - p[j]);
        best = std::max(best, v);
    }
    return best * (1.0 + 1e-3);
}

/// sum over remainder indices beta of M_beta / beta! * sup |N_beta|. The
/// bound callback returns M_beta >= sup |d^beta f|, or nullopt if unknown.
/// N_beta for a remainder index uses the same generating values as the
/// interpolant, so gp is the one the nodes were built from.
inline double error_bound(const MultiIndexSet& A, const GeneratingNodes& gp,
                          const std::function<std::optional<double>(const MultiIndex&)>& derivative_bound) {
    if (gp.dim() != A.dim()) throw DimensionError("error_bound: generating nodes dimension mismatch");
    double total = 0.0;
    for (const MultiIndex& beta : remainder_indices(A)) {
        const std::optional<double> M = derivative_bound(beta);
        if (!M) {
            std::string s;
            for (std::size_t i = 0; i < beta.dim(); ++i) s += (i ? "," : "") + std::to_string(beta[i]);
            throw InvalidArgument("error_bound: missing derivative bound for (" + s + ")");
        }
        if (*M < 0.0) throw InvalidArgument("error_bound: negative derivative bound");
        if (*M == 0.0) continue;
        double sup = 1.0;
        for (std::size_t d = 0; d < A.dim(); ++d) sup *= newton_sup_1d(gp[d], beta[d]);
        total += *M / beta.factorial() * sup;
    }
    return total;
}

inline double error_bound(const MultiIndexSet& A, const GeneratingNodes& gp,
                          const std::map<std::vector<Exponent>, double>& bounds) {
    return error_bound(A, gp, [&](const MultiIndex& b) -> std::optional<double> {
        auto it = bounds.find(std::vector<Exponent>(b.begin(), b.end()));
        if (it == bounds.end()) return std::nullopt;
        return it->second;
    });
}

// ---- benchmarks ----

struct BenchmarkRecord {
    std::size_t m = 0;
    Exponent n = 0;
    DegreeNorm p;
    std::size_t cardinality = 0;
    double max_error = 0.0;
    double seconds = 0.0;
    std::uint64_t seed = 0;
};

struct ConvergenceOptions {
    NodeFamily family = NodeFamily::cheb2;
    bool leja = true;
    std::size_t test_points = 100;
    std::uint64_t seed = 0;
    std::size_t cardinality_cap = default_cardinality_cap;
    std::size_t threads = 0;  // 0: hardware concurrency
};

/// Runs `job(i)` for i in [0, count) on a small thread pool.
template <class Job>
void parallel_for(std::size_t count, std::size_t threads, Job&& job) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min(threads, count);
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) job(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_lock;
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (std::size_t i; (i = next++) < count;) {
                try {
                    job(i);
                } catch (...) {
                    std::lock_guard g(failure_lock);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

/// Test points for degree n: `count` uniform points from the stream (seed, n).
inline std::vector<double> benchmark_test_points(std::size_t m, Exponent n, std::size_t count, std::uint64_t seed) {
    auto rng = seeded_engine({seed, n});
    return uniform_points(m, count, rng);
}

inline BenchmarkRecord convergence_record(const Function& f, std::size_t m, DegreeNorm p, Exponent n,
                                          const ConvergenceOptions& o) {
    const auto t0 = std::chrono::steady_clock::now();
    auto A = std::make_shared<const MultiIndexSet>(build_complete_set(m, n, p, o.cardinality_cap));
    auto gp = std::make_shared<const GeneratingNodes>(make_generating_nodes(m, n, o.family, o.leja));
    UnisolventNodes nodes(A, gp);
    NewtonPolynomial Q = divided_differences(nodes, sample_at_nodes(nodes, f));
    const std::vector<double> pts = benchmark_test_points(m, n, o.test_points, o.seed);
    const std::vector<double> q = eval_newton_batch(Q, pts);
    double err = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i)
        err = std::max(err, std::abs(f(std::span(pts).subspan(i * m, m)) - q[i]));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {m, n, p, A->size(), err, secs, o.seed};
}

/// One record per degree, in the order of `degrees`. Degrees run in parallel.
inline std::vector<BenchmarkRecord> run_convergence(const Function& f, std::size_t m, DegreeNorm p,
                                                    const std::vector<Exponent>& degrees,
                                                    const ConvergenceOptions& o = {}) {
    std::vector<BenchmarkRecord> out(degrees.size());
    parallel_for(degrees.size(), o.threads, [&](std::size_t i) { out[i] = convergence_record(f, m, p, degrees[i], o); });
    return out;
}

struct RateFit {
    double rho = 1.0;
    double c = 0.0;
    Exponent n_lo = 0, n_hi = 0;
    double r_squared = 0.0;
    std::size_t points_used = 0;
    std::size_t points_floored = 0;  // nonpositive errors, excluded
    bool non_converging = false;     // rho <= 1
};

/// Least squares for log(err) = log(c) - n log(rho) over records with
/// n_lo <= n <= n_hi. Nonpositive errors are excluded and counted. When all
/// used errors are equal the fit is exact and R^2 is reported as 1.
inline RateFit fit_rate(std::span<const BenchmarkRecord> records, Exponent n_lo, Exponent n_hi) {
    RateFit fit;
    fit.n_lo = n_lo;
    fit.n_hi = n_hi;
    std::vector<double> xs, ys;
    for (const auto& r : records) {
        if (r.n < n_lo || r.n > n_hi) continue;
        if (!(r.max_error > 0.0)) {
            ++fit.points_floored;
            continue;
        }
        xs.push_back(static_cast<double>(r.n));
        ys.push_back(std::log(r.max_error));
    }
    if (xs.size() < 4)
        throw InvalidArgument("fit_rate: need at least 4 positive errors in range, have " + std::to_string(xs.size()));
    const double k = static_cast<double>(xs.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) mx += xs[i], my += ys[i];
    mx /= k;
    my /= k;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    if (sxx == 0.0) throw InvalidArgument("fit_rate: all records have the same degree");
    const double slope = sxy / sxx, icept = my - slope * mx;
    fit.rho = std::exp(-slope);
    fit.c = std::exp(icept);
    double ss_res = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double e = ys[i] - (icept + slope * xs[i]);
        ss_res += e * e;
    }
    fit.r_squared = syy == 0.0 ? 1.0 : std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
    fit.points_used = xs.size();
    fit.non_converging = fit.rho <= 1.0 + 1e-12;
    return fit;
}

// ---- perturbation study ----

struct PerturbationRecord {
    Exponent n = 0;
    double amplitude = 0.0;
    std::size_t cardinality = 0;
    double ap = 0.0;        // max error of the scattered interpolant
    double ap0 = 0.0;       // max error on the unperturbed grid
    double s_inf = 0.0;
    double s_n = 0.0;
    double est = 0.0;       // s_n * ap0
    std::size_t rejected = 0;  // singular draws that were resampled
    bool failed = false;       // every retry was singular
};

struct PerturbationOptions {
    std::size_t test_points = 200;
    std::size_t max_retries = 5;
    std::uint64_t seed = 0;
    NodeFamily family = NodeFamily::cheb2;
    std::size_t threads = 0;
};

/// For every degree: unperturbed interpolation gives AP-0; each amplitude
/// perturbs the grid, solves the change of nodes and measures AP-nu on the
/// same test points; EST-nu = s_n * AP-0 with Lambda taken as LEB(n)^m.
inline std::vector<PerturbationRecord> run_perturbation_study(const Function& f, std::size_t m, DegreeNorm p,
                                                              const std::vector<Exponent>& degrees,
                                                              const std::vector<double>& amplitudes,
                                                              const PerturbationOptions& o = {}) {
    for (double a : amplitudes)
        if (!(a >= 0.0 && a <= 1.0)) throw InvalidArgument("run_perturbation_study: amplitudes must lie in [0,1]");
    std::vector<std::vector<PerturbationRecord>> rows(degrees.size());
    parallel_for(degrees.size(), o.threads, [&](std::size_t di) {
        const Exponent n = degrees[di];
        auto A = std::make_shared<const MultiIndexSet>(build_complete_set(m, n, p));
        auto gp = std::make_shared<const GeneratingNodes>(make_generating_nodes(m, n, o.family, true));
        const TransformSet T{UnisolventNodes(A, gp)};
        const std::vector<double> pts = benchmark_test_points(m, n, o.test_points, o.seed);
        std::vector<double> fx(o.test_points);
        for (std::size_t i = 0; i < fx.size(); ++i) fx[i] = f(std::span(pts).subspan(i * m, m));
        auto max_err = [&](const NewtonPolynomial& Q) {
            auto q = eval_newton_batch(Q, pts);
            double e = 0.0;
            for (std::size_t i = 0; i < q.size(); ++i) e = std::max(e, std::abs(fx[i] - q[i]));
            return e;
        };
        const double ap0 = max_err(divided_differences(T.nodes(), sample_at_nodes(T.nodes(), f)));
        const double lambda = std::pow(lebesgue_1d_formula(std::max<double>(n, 1)), static_cast<double>(m));

        for (std::size_t ai = 0; ai < amplitudes.size(); ++ai) {
            PerturbationRecord rec{.n = n, .amplitude = amplitudes[ai], .cardinality = A->size(), .ap0 = ap0};
            auto rng = seeded_engine({o.seed, n, ai, 0x9e});
            std::optional<ScatteredSystem> sys;
            for (std::size_t attempt = 0; attempt <= o.max_retries && !sys; ++attempt) {
                try {
                    sys.emplace(build_scattered(T, perturb_nodes(T.nodes(), amplitudes[ai], rng)));
                } catch (const SingularSystemError&) {
                    ++rec.rejected;
                }
            }
            if (!sys) {
                rec.failed = true;
                rows[di].push_back(rec);
                continue;
            }
            std::vector<double> F(A->size());
            for (std::size_t i = 0; i < F.size(); ++i) F[i] = f(sys->given_node(i));
            const std::vector<double> lag = interpolate_scattered(*sys, F);
            rec.ap = max_err(lagrange_to_newton(T.nodes(), lag));
            rec.s_inf = sys->s_inf();
            rec.s_n = scattered_error_factor(*sys, lambda);
            rec.est = rec.s_n * ap0;
            rows[di].push_back(rec);
        }
    });
    std::vector<PerturbationRecord> out;
    for (auto& r : rows) out.insert(out.end(), r.begin(), r.end());
    return out;
}

}  // namespace mvinterp
