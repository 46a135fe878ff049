// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include "grad_check.hpp"
#include "lcc/approx_verify.hpp"
#include "lcc/cli/commands.hpp"
#include "lcc/csv.hpp"
#include "lcc/datasets.hpp"
#include "lcc/lcc_core.hpp"
#include "lcc/sampling.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

using namespace lcc;
namespace fs = std::filesystem;

namespace {

// 2 x mmd2(train half, held-out half) for the seed-7 ring, from the oracle
// run; bandwidth 1.4134063034037845 (median held-out pairwise distance).
constexpr double kPipelineThreshold = -7.439070388315372e-05;
constexpr double kRealHalves = -3.719535194157686e-05;

struct Outcome {
    bool pass = false;
    std::string detail;
};

fs::path g_workdir = "acceptance_out";

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

std::string fmt(double x) { return format_double(x); }

std::map<std::string, double> read_metrics(const fs::path& p) {
    std::map<std::string, double> out;
    std::istringstream is(slurp(p));
    std::string line;
    std::getline(is, line);
    while (std::getline(is, line)) {
        const auto comma = line.find(',');
        if (comma != std::string::npos) out[line.substr(0, comma)] = std::stod(line.substr(comma + 1));
    }
    return out;
}

int cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    if (code != 0) std::cerr << "  [" << args.front() << "] " << err.str();
    return code;
}

Outcome coding_constraints() {
    Rng rng(101);
    long draws = 0, solves = 0, bad = 0;
    double worst = 0.0;
    auto check = [&](const Coding& c, Index d) {
        const double dev = std::abs(c.sum() - 1.0);
        worst = std::max(worst, dev);
        if (!(dev <= 1e-9) || c.nnz() > d) ++bad;
    };
    auto random_set = [&](Index dim, Index m) {
        Matrix V(dim, m);
        for (Index k = 0; k < V.size(); ++k) V(k) = rng.normal();
        return AnchorSet(V);
    };
    for (int set = 0; set < 100; ++set) {
        const Index m = 2 + static_cast<Index>(rng.below(31));
        const AnchorSet a = random_set(1 + static_cast<Index>(rng.below(4)), m);
        SamplerConfig s;
        s.d = 1 + static_cast<Index>(rng.below(static_cast<std::uint64_t>(std::min<Index>(m, 8))));
        for (int i = 0; i < 100; ++i, ++draws) check(sample_coding(a, s, rng), s.d);
    }
    for (int i = 0; i < 1000; ++i, ++solves) {
        const Index dim = 1 + static_cast<Index>(rng.below(4));
        const Index m = 1 + static_cast<Index>(rng.below(16));
        const AnchorSet a = random_set(dim, m);
        Vector h(dim);
        for (Index k = 0; k < dim; ++k) h(k) = 1.5 * rng.normal();
        LccConfig c;
        c.m = m;
        c.d = 1 + static_cast<Index>(rng.below(static_cast<std::uint64_t>(m)));
        c.q = 2 + static_cast<int>(rng.below(2));
        c.l_q = std::pow(10.0, rng.uniform(-4.0, 1.0));
        check(solve_coding(h, a, c), c.d);
    }
    return {bad == 0, std::to_string(draws) + " draws + " + std::to_string(solves) + " solves, " + std::to_string(bad) +
                          " violations, max |sum-1| = " + fmt(worst)};
}

// Objective histories for the four ring runs, one CSV block each.
std::string monotonicity_csv(bool& ok, double& worst_rise, std::string* iterations = nullptr) {
    const Dataset ring = make_ring(200, 1.0, 0.01, 7);
    std::ostringstream csv;
    csv << "q,l_q,iter,objective\n";
    ok = true;
    worst_rise = -INFINITY;
    for (int q : {2, 3}) {
        for (double l_q : {1e-4, 1.0}) {
            LccConfig c;
            c.m = 8;
            c.d = 2;
            c.q = q;
            c.l_q = l_q;
            c.max_outer_iters = 30;
            c.anchor_tol = 1e-300;
            c.seed = 7;
            const LccFit fit = learn_anchors(ring.samples, c);
            if (iterations) *iterations += (iterations->empty() ? "" : "/") + std::to_string(fit.objective_history.size() - 1);
            for (std::size_t t = 0; t < fit.objective_history.size(); ++t) {
                csv << q << ',' << fmt(l_q) << ',' << t << ',' << fmt(fit.objective_history[t]) << '\n';
                if (t > 0) {
                    const double rise = fit.objective_history[t] - fit.objective_history[t - 1];
                    worst_rise = std::max(worst_rise, rise);
                    if (rise > 1e-8) ok = false;
                }
            }
            // the last recorded value must be the objective of what is returned
            const double final_obj = lcc_objective(ring.samples, fit.codings, fit.anchors, c);
            if (std::abs(final_obj - fit.objective_history.back()) > 1e-12 * std::max(1.0, final_obj)) ok = false;
        }
    }
    return csv.str();
}

Outcome monotonicity() {
    bool ok = false;
    double rise = 0.0;
    std::string iters;
    monotonicity_csv(ok, rise, &iters);
    return {ok, "q in {2,3} x l_q in {1e-4,1}, up to 30 outer iterations (ran " + iters +
                    "); largest step-to-step change " + fmt(rise)};
}

Outcome sweep(BoundKind kind, const std::string& what) {
    const auto cases = bound_sweep(kind, 1000, 20240 + static_cast<std::uint64_t>(kind));
    long held = 0;
    double tightest = INFINITY, largest_lhs = 0.0;
    for (const auto& c : cases) {
        held += c.pass ? 1 : 0;
        largest_lhs = std::max(largest_lhs, c.lhs);
        if (c.lhs > 0.0) tightest = std::min(tightest, c.rhs / c.lhs);
    }
    std::string detail = what + ": " + std::to_string(held) + "/" + std::to_string(cases.size()) + " hold";
    if (kind == BoundKind::lemma1_affine) {
        detail += ", max lhs " + fmt(largest_lhs);
    } else {
        detail += ", tightest rhs/lhs " + fmt(tightest);
    }
    return {held == static_cast<long>(cases.size()), detail};
}

Outcome lemma1() {
    const Outcome q = sweep(BoundKind::lemma1_quadratic, "quadratic");
    const Outcome a = sweep(BoundKind::lemma1_affine, "affine");
    return {q.pass && a.pass, q.detail + "; " + a.detail};
}

Outcome lemma2() { return sweep(BoundKind::lemma2_quadratic, "quadratic, L_nu = 0"); }

Outcome gradients() {
    double worst = 0.0;
    for (nn::Phi phi : {nn::Phi::log, nn::Phi::identity}) {
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            const auto r = testing::gradient_report(seed, phi);
            worst = std::max({worst, r.autoencoder, r.discriminator, r.generator});
        }
    }
    return {worst < 1e-4, "autoencoder/discriminator/generator, 5 seeds x 2 measuring functions, max rel err " +
                              fmt(worst)};
}

Outcome oracle_equivalence() {
    Matrix V(2, 2);
    V << -1, 1, 0, 0;
    const AnchorSet a(V);
    const Vector h = Vector::Zero(2);
    LccConfig c;
    c.m = 2;
    c.d = 2;
    c.l_h = 1.0;
    c.l_q = 1.0;
    c.q = 2;
    double best = INFINITY, best_g = 0.0;
    for (int k = 0; k <= 30000; ++k) {
        const double g = -1.0 + 1e-4 * k;
        const double r0 = -g + (1.0 - g);
        const double f = 2.0 * std::abs(r0) + std::abs(g) * 1.0 + std::abs(1.0 - g) * 1.0;
        if (f < best) {
            best = f;
            best_g = g;
        }
    }
    const Coding got = solve_coding(h, a, c);
    const double obj = coding_objective(h, got, a, c);
    const bool ok = std::abs(obj - best) <= 1e-3 && std::abs(got.weights(0) - 0.5) <= 1e-3 &&
                    std::abs(got.weights(1) - 0.5) <= 1e-3;
    return {ok, "solver gamma = (" + fmt(got.weights(0)) + ", " + fmt(got.weights(1)) + "), objective " + fmt(obj) +
                    "; grid gamma1 = " + fmt(best_g) + ", objective " + fmt(best)};
}

fs::path write_pipeline_config(const fs::path& dir) {
    fs::create_directories(dir);
    const fs::path p = dir / "ring.ini";
    std::ofstream f(p);
    f << "seed = 7\n"
         "[data]\nkind = ring\nn = 2000\nradius = 1.0\nnoise = 0.01\nholdout = 0.5\n"
         "[autoencoder]\nlatent_dim = 2\nhidden = 64\nactivation = tanh\nepochs = 200\nbatch = 64\nlr = 0.001\n"
         "[lcc]\nm = 16\nq = 2\nl_h = 1.0\nl_q = 0.0001\nmax_outer_iters = 30\n"
         "[sampler]\nd = 2\n"
         "[gan]\nphi = log\niters = 5000\nbatch = 64\nlr = 0.0002\nbeta1 = 0.5\nbeta2 = 0.999\n"
         "generator_hidden = 128,128\ndiscriminator_hidden = 128,128\n"
         "[eval]\nn = 1000\npearson_n = 100\n"
         "[interpolate]\nsteps = 10\n"
         "[output]\ndir = " << (dir / "out").string() << "\n";
    return p;
}

bool run_pipeline(const fs::path& dir) {
    fs::remove_all(dir);
    const std::string cfg = write_pipeline_config(dir).string();
    for (const char* cmd : {"train-ae", "learn-lcc", "train-gan", "eval"})
        if (cli({cmd, "-c", cfg}) != 0) return false;
    return cli({"interpolate", "-c", cfg}) == 0;
}

Outcome pipeline_quality() {
    if (!run_pipeline(g_workdir / "pipeline")) return {false, "pipeline command failed"};
    const auto m = read_metrics(g_workdir / "pipeline" / "out" / "metrics.csv");
    const double mmd = m.at("mmd2");
    std::string detail = "mmd2(generated, held-out) = " + fmt(mmd) + ", threshold = " + fmt(kPipelineThreshold) +
                         " (2 x real-halves " + fmt(kRealHalves) + ", pipeline recomputed " +
                         fmt(m.at("mmd2_real_halves")) + ")";
    if (kPipelineThreshold <= 0.0) {
        detail += "; the unbiased estimate between two real samples is centred on 0, so a negative threshold "
                  "sits below what even a perfect generator scores on average";
    }
    const bool consistent = std::abs(m.at("mmd2_real_halves") - kRealHalves) <= 1e-12;
    return {consistent && mmd < kPipelineThreshold, detail};
}

Outcome sampling_demo() {
    const fs::path out = g_workdir / "pipeline" / "out";
    if (!fs::exists(out / "metrics.csv")) return {false, "pipeline outputs missing"};
    const double frac = read_metrics(out / "metrics.csv").at("pearson_nonzero_fraction");

    std::istringstream is(slurp(out / "interp_samples.csv"));
    const Matrix path = read_matrix_csv(is, "interp_samples.csv");
    double worst = 0.0;
    const Index inner = path.rows() - 2;
    for (Index i = 1; i + 1 < path.rows(); ++i) worst = std::max(worst, std::abs(path.row(i).norm() - 1.0));
    const bool interp_ok = inner == 8 && worst <= 0.2;
    const bool pearson_ok = frac >= 0.95;
    std::string detail = "pearson_nn > 0 for " + fmt(100.0 * frac) + "% of 100 samples (need >= 95%)";
    if (!pearson_ok) {
        detail += " -- in 2-D every correlation is exactly +1 or -1, so the nearest training point always has "
                  "distance 0";
    }
    detail += "; " + std::to_string(inner) + " interpolants, max | ||x|| - 1 | = " + fmt(worst);
    return {pearson_ok && interp_ok, detail};
}

Outcome determinism() {
    bool ok1 = false, ok2 = false;
    double r1 = 0.0, r2 = 0.0;
    const bool monotone_same = monotonicity_csv(ok1, r1) == monotonicity_csv(ok2, r2);

    const fs::path first = g_workdir / "pipeline" / "out";
    if (!run_pipeline(g_workdir / "pipeline_repeat")) return {false, "repeat pipeline failed"};
    const fs::path second = g_workdir / "pipeline_repeat" / "out";
    int files = 0, differ = 0;
    for (const auto& e : fs::directory_iterator(first)) {
        if (e.path().extension() != ".csv") continue;
        ++files;
        if (slurp(e.path()) != slurp(second / e.path().filename())) {
            ++differ;
            std::cerr << "  differs: " << e.path().filename().string() << '\n';
        }
    }
    return {monotone_same && differ == 0 && files > 0,
            std::string("monotonicity CSV ") + (monotone_same ? "identical" : "differs") + "; pipeline " +
                std::to_string(files - differ) + "/" + std::to_string(files) + " CSV files identical"};
}

}  // namespace

int main(int argc, char** argv) {
    for (int i = 1; i + 1 < argc; ++i)
        if (std::string(argv[i]) == "--workdir") g_workdir = argv[i + 1];
    fs::create_directories(g_workdir);

    struct Criterion {
        int id;
        const char* name;
        double budget_s;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {1, "coding constraints", 10, coding_constraints},
        {2, "alternating-minimization monotonicity", 30, monotonicity},
        {3, "lemma 1 bound", 5, lemma1},
        {4, "lemma 2 bound", 5, lemma2},
        {5, "gradient correctness", 10, gradients},
        {6, "brute-force oracle equivalence", 1e9, oracle_equivalence},
        {7, "desk-scale pipeline quality", 300, pipeline_quality},
        {8, "sampling demonstration", 30, sampling_demo},
        {9, "determinism", 1e9, determinism},
    };

    int failed = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (secs > c.budget_s) {
            o.pass = false;
            o.detail += "; over the time budget";
        }
        failed += o.pass ? 0 : 1;
        std::printf("%s  %d  %-40s %7.2fs  %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, secs, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
