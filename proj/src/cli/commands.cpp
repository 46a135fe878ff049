#include "lcc/cli/commands.hpp"

#include "lcc/anchor_io.hpp"
#include "lcc/approx_verify.hpp"
#include "lcc/cli/config.hpp"
#include "lcc/cli/pgm.hpp"
#include "lcc/csv.hpp"
#include "lcc/datasets.hpp"
#include "lcc/eval.hpp"
#include "lcc/lcc_core.hpp"
#include "lcc/neural/autoencoder.hpp"
#include "lcc/neural/gan.hpp"
#include "lcc/sampling.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>

namespace lcc::cli {

namespace fs = std::filesystem;

namespace {

// Stream ids for deriving per-stage seeds from the global seed.
enum Stage : std::uint64_t {
    kStageAutoencoder = 2,
    kStageLcc = 3,
    kStageGanInit = 4,
    kStageGanTrain = 5,
    kStageSample = 6,
    kStageInterpolate = 7,
    kStageVerify = 8,
    kStageEval = 9,
};

struct Context {
    Config cfg;
    std::uint64_t seed = 0;
    fs::path out_dir;
    std::ostream* out = nullptr;

    std::uint64_t stage_seed(Stage s) const { return Rng(seed).split(s).seed(); }

    /// Resolves an artifact declared under [output]; names must stay inside the output directory.
    fs::path artifact(const std::string& key, const std::string& fallback) const {
        const std::string name = cfg.get_string("output." + key, fallback);
        const fs::path p(name);
        if (name.empty() || p.is_absolute() || p.has_root_path()) {
            throw ConfigError("output." + key + ": artifact name must be a relative path, got '" + name + "'");
        }
        for (const auto& part : p) {
            if (part == "..") throw ConfigError("output." + key + ": artifact path may not leave the output directory");
        }
        return out_dir / p;
    }

    std::ofstream open(const fs::path& path) const {
        fs::create_directories(path.parent_path());
        std::ofstream os(path, std::ios::binary);
        if (!os) throw Error("cannot write file: " + path.string());
        return os;
    }

    void note(const std::string& what, const fs::path& path) const { *out << what << ": " << path.string() << '\n'; }
};

void require_file(const fs::path& path, const std::string& what) {
    if (!fs::exists(path)) {
        throw Error("missing " + what + " '" + path.string() + "' (run the producing subcommand first)");
    }
}

struct Split {
    Dataset train;
    Dataset holdout;
    std::string kind;
};

Split load_data(const Context& ctx) {
    const Config& c = ctx.cfg;
    const std::string kind = c.get_string("data.kind", "ring");
    const std::uint64_t seed = c.get_u64("data.seed", ctx.seed);
    Dataset full;
    if (kind == "ring") {
        full = make_ring(c.get_int("data.n", 2000), c.get_double("data.radius", 1.0), c.get_double("data.noise", 0.01),
                         seed);
    } else if (kind == "swiss_roll") {
        full = make_swiss_roll(c.get_int("data.n", 2000), c.get_double("data.noise", 0.0), seed);
    } else if (kind == "mnist") {
        full = load_mnist_idx(c.require_string("data.images"), c.get_string("data.labels", ""),
                              c.get_int("data.limit", 0), c.get_int("data.downsample", 0));
    } else if (kind == "csv") {
        full = Dataset{load_matrix_csv(c.require_string("data.path")).transpose(), "csv", std::nullopt, {}};
    } else {
        throw ConfigError("data.kind: unknown dataset '" + kind + "' (ring, swiss_roll, mnist, csv)");
    }
    if (full.size() < 2) throw InsufficientDataError("data: need at least two samples");
    const double frac = c.get_double("data.holdout", 0.5);
    if (!(frac >= 0.0 && frac < 1.0)) throw ConfigError("data.holdout must be in [0, 1)");
    const Index hold = static_cast<Index>(std::llround(frac * static_cast<double>(full.size())));
    const Index train = full.size() - hold;
    return {full.slice(0, train), full.slice(train, hold), kind};
}

Index image_side(const Context& ctx, Index data_dim) {
    if (ctx.cfg.get_string("data.kind", "ring") != "mnist") return 0;
    const Index side = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(data_dim))));
    return side * side == data_dim ? side : 0;
}

void save_picture(const Context& ctx, const fs::path& path, const Matrix& samples, const Matrix& frame) {
    const Index side = image_side(ctx, samples.rows());
    std::ofstream os = ctx.open(path);
    if (side > 0) {
        write_pgm(os, render_grid(samples, side, 8));
    } else if (samples.rows() >= 2) {
        write_pgm(os, render_scatter(samples, 256, frame));
    } else {
        return;
    }
    ctx.note("image", path);
}

LccConfig lcc_config(const Context& ctx) {
    const Config& c = ctx.cfg;
    LccConfig lc;
    lc.l_h = c.get_double("lcc.l_h", lc.l_h);
    lc.l_q = c.get_double("lcc.l_q", lc.l_q);
    lc.q = static_cast<int>(c.get_int("lcc.q", lc.q));
    lc.m = c.get_int("lcc.m", lc.m);
    lc.d = c.get_int("lcc.d", c.get_int("sampler.d", std::min<long long>(lc.d, lc.m)));
    lc.max_outer_iters = static_cast<int>(c.get_int("lcc.max_outer_iters", lc.max_outer_iters));
    lc.max_coding_sweeps = static_cast<int>(c.get_int("lcc.max_coding_sweeps", lc.max_coding_sweeps));
    lc.coding_tol = c.get_double("lcc.coding_tol", lc.coding_tol);
    lc.anchor_tol = c.get_double("lcc.anchor_tol", lc.anchor_tol);
    lc.fill_missing_anchors = c.get_bool("lcc.fill_missing_anchors", false);
    lc.seed = ctx.stage_seed(kStageLcc);
    lc.validate();
    return lc;
}

SamplerConfig sampler_config(const Context& ctx) {
    SamplerConfig sc;
    sc.d = ctx.cfg.get_int("sampler.d", sc.d);
    sc.min_abs_sum = ctx.cfg.get_double("sampler.min_abs_sum", sc.min_abs_sum);
    sc.max_redraws = static_cast<int>(ctx.cfg.get_int("sampler.max_redraws", sc.max_redraws));
    return sc;
}

AnchorSet load_anchor_artifact(const Context& ctx) {
    const fs::path p = ctx.artifact("anchors", "anchors.bin");
    require_file(p, "anchor file");
    return load_anchors(p.string());
}

nn::Mlp load_generator(const Context& ctx, const AnchorSet& anchors) {
    const fs::path p = ctx.artifact("generator", "generator.bin");
    require_file(p, "generator checkpoint");
    nn::Mlp g = nn::load_mlp(p.string());
    if (g.in_dim() != anchors.m()) {
        throw DimensionError("generator input width " + std::to_string(g.in_dim()) + " does not match anchor count " +
                             std::to_string(anchors.m()));
    }
    return g;
}

Matrix codings_matrix(const std::vector<Coding>& codings, Index m) {
    Matrix out(m, static_cast<Index>(codings.size()));
    for (std::size_t i = 0; i < codings.size(); ++i) out.col(static_cast<Index>(i)) = codings[i].weights;
    return out;
}

std::vector<Coding> codings_list(const Matrix& cols) {
    std::vector<Coding> out;
    for (Index i = 0; i < cols.cols(); ++i) out.emplace_back(cols.col(i));
    return out;
}

int cmd_train_ae(const Context& ctx) {
    const Split data = load_data(ctx);
    nn::AutoencoderArch arch;
    arch.latent_dim = ctx.cfg.get_int("autoencoder.latent_dim", arch.latent_dim);
    arch.hidden = ctx.cfg.get_index_list("autoencoder.hidden", arch.hidden);
    arch.hidden_act = nn::parse_activation(ctx.cfg.get_string("autoencoder.activation", "tanh"));
    nn::AutoencoderOptions opt;
    opt.epochs = static_cast<int>(ctx.cfg.get_int("autoencoder.epochs", opt.epochs));
    opt.batch = ctx.cfg.get_int("autoencoder.batch", opt.batch);
    opt.adam.lr = ctx.cfg.get_double("autoencoder.lr", opt.adam.lr);
    opt.seed = ctx.stage_seed(kStageAutoencoder);

    const nn::AutoencoderFit fit = nn::train_autoencoder(data.train.samples, arch, opt);

    const fs::path enc = ctx.artifact("encoder", "encoder.bin");
    const fs::path dec = ctx.artifact("decoder", "decoder.bin");
    {
        std::ofstream os = ctx.open(enc);
        nn::write_mlp(os, fit.encoder);
    }
    {
        std::ofstream os = ctx.open(dec);
        nn::write_mlp(os, fit.decoder);
    }
    const fs::path loss = ctx.artifact("ae_loss", "ae_loss.csv");
    {
        std::ofstream os = ctx.open(loss);
        os << "epoch,mse\n";
        for (std::size_t e = 0; e < fit.loss_history.size(); ++e) os << e << ',' << format_double(fit.loss_history[e]) << '\n';
    }
    const fs::path emb = ctx.artifact("embeddings", "embeddings.csv");
    {
        std::ofstream os = ctx.open(emb);
        write_matrix_csv(os, nn::forward_batch(fit.encoder, data.train.samples).transpose());
    }
    ctx.note("encoder", enc);
    ctx.note("decoder", dec);
    ctx.note("embeddings", emb);
    if (!fit.loss_history.empty()) *ctx.out << "final reconstruction mse: " << format_double(fit.loss_history.back()) << '\n';
    return 0;
}

int cmd_learn_lcc(const Context& ctx) {
    const fs::path emb = ctx.artifact("embeddings", "embeddings.csv");
    require_file(emb, "embedding file");
    const Matrix points = load_matrix_csv(emb.string()).transpose();
    const LccConfig lc = lcc_config(ctx);
    const LccFit fit = learn_anchors(points, lc);

    const fs::path anchors_bin = ctx.artifact("anchors", "anchors.bin");
    {
        std::ofstream os = ctx.open(anchors_bin);
        write_anchors(os, fit.anchors);
    }
    {
        std::ofstream os = ctx.open(ctx.artifact("anchors_csv", "anchors.csv"));
        write_anchors_csv(os, fit.anchors);
    }
    {
        std::ofstream os = ctx.open(ctx.artifact("lcc_objective", "lcc_objective.csv"));
        os << "iter,objective\n";
        for (std::size_t t = 0; t < fit.objective_history.size(); ++t) {
            os << t << ',' << format_double(fit.objective_history[t]) << '\n';
        }
    }
    {
        std::ofstream os = ctx.open(ctx.artifact("lcc_codings", "lcc_codings.csv"));
        write_codings_csv(os, fit.codings);
    }
    const double q_measure = localization_measure(points, fit.codings, fit.anchors, lc);
    {
        std::ofstream os = ctx.open(ctx.artifact("lcc_summary", "lcc_summary.csv"));
        os << "metric,value\n";
        os << "objective," << format_double(fit.objective_history.back()) << '\n';
        os << "localization_measure," << format_double(q_measure) << '\n';
        os << "outer_iterations," << fit.objective_history.size() - 1 << '\n';
    }
    ctx.note("anchors", anchors_bin);
    *ctx.out << "objective: " << format_double(fit.objective_history.back())
             << "  localization measure: " << format_double(q_measure) << '\n';
    return 0;
}

int cmd_train_gan(const Context& ctx) {
    const Split data = load_data(ctx);
    const AnchorSet anchors = load_anchor_artifact(ctx);
    const SamplerConfig sampler = sampler_config(ctx);
    const Config& c = ctx.cfg;

    const nn::Phi phi = nn::parse_phi(c.get_string("gan.phi", "log"));
    nn::GanArch arch;
    arch.generator_hidden = c.get_index_list("gan.generator_hidden", arch.generator_hidden);
    arch.discriminator_hidden = c.get_index_list("gan.discriminator_hidden", arch.discriminator_hidden);
    arch.generator_output =
        nn::parse_activation(c.get_string("gan.output", data.kind == "mnist" ? "tanh" : "identity"));
    nn::AdamParams adam;
    adam.lr = c.get_double("gan.lr", adam.lr);
    adam.beta1 = c.get_double("gan.beta1", adam.beta1);
    adam.beta2 = c.get_double("gan.beta2", adam.beta2);
    const int iters = static_cast<int>(c.get_int("gan.iters", 5000));
    const Index batch = c.get_int("gan.batch", 64);

    nn::GanModel gan = nn::make_gan(anchors.m(), data.train.data_dim(), phi, arch, adam, ctx.stage_seed(kStageGanInit));
    const nn::GanTrace trace =
        nn::train_gan(data.train.samples, anchors, sampler, gan, iters, batch, ctx.stage_seed(kStageGanTrain));

    const fs::path gen = ctx.artifact("generator", "generator.bin");
    {
        std::ofstream os = ctx.open(gen);
        nn::write_mlp(os, gan.generator);
    }
    {
        std::ofstream os = ctx.open(ctx.artifact("discriminator", "discriminator.bin"));
        nn::write_mlp(os, gan.discriminator);
    }
    const fs::path loss = ctx.artifact("gan_loss", "gan_loss.csv");
    {
        std::ofstream os = ctx.open(loss);
        nn::write_trace_csv(os, trace);
    }
    ctx.note("generator", gen);
    ctx.note("losses", loss);
    return 0;
}

int cmd_sample(const Context& ctx) {
    const AnchorSet anchors = load_anchor_artifact(ctx);
    const nn::Mlp generator = load_generator(ctx, anchors);
    const SamplerConfig sampler = sampler_config(ctx);
    const Index n = ctx.cfg.get_int("sample.n", 64);
    Rng rng(ctx.stage_seed(kStageSample));
    const Matrix codings = sample_codings(anchors, sampler, rng, n);
    const Matrix samples = nn::forward_batch(generator, codings);

    const fs::path cpath = ctx.artifact("codings", "codings.csv");
    {
        std::ofstream os = ctx.open(cpath);
        write_codings_csv(os, codings_list(codings));
    }
    const fs::path spath = ctx.artifact("samples", "samples.csv");
    {
        std::ofstream os = ctx.open(spath);
        write_matrix_csv(os, samples.transpose());
    }
    ctx.note("codings", cpath);
    ctx.note("samples", spath);
    save_picture(ctx, ctx.artifact("samples_image", "samples.pgm"), samples, Matrix());
    return 0;
}

int cmd_interpolate(const Context& ctx) {
    const AnchorSet anchors = load_anchor_artifact(ctx);
    const nn::Mlp generator = load_generator(ctx, anchors);
    const SamplerConfig sampler = sampler_config(ctx);
    const int steps = static_cast<int>(ctx.cfg.get_int("interpolate.steps", 10));
    Rng rng(ctx.stage_seed(kStageInterpolate));
    // Both endpoints share one local coordinate system.
    const Index center = ctx.cfg.has("interpolate.center")
                             ? ctx.cfg.get_int("interpolate.center", 0)
                             : static_cast<Index>(rng.below(static_cast<std::uint64_t>(anchors.m())));
    const Coding a = sample_coding_at(anchors, center, sampler, rng);
    const Coding b = sample_coding_at(anchors, center, sampler, rng);
    const std::vector<Coding> path = interpolate(a, b, steps);
    const Matrix samples = nn::forward_batch(generator, codings_matrix(path, anchors.m()));

    const fs::path cpath = ctx.artifact("interp_codings", "interp_codings.csv");
    {
        std::ofstream os = ctx.open(cpath);
        write_codings_csv(os, path);
    }
    const fs::path spath = ctx.artifact("interp_samples", "interp_samples.csv");
    {
        std::ofstream os = ctx.open(spath);
        write_matrix_csv(os, samples.transpose());
    }
    ctx.note("codings", cpath);
    ctx.note("samples", spath);
    save_picture(ctx, ctx.artifact("interp_image", "interp.pgm"), samples, Matrix());
    return 0;
}

int cmd_verify_bounds(const Context& ctx) {
    const int n = static_cast<int>(ctx.cfg.get_int("verify.cases", 1000));
    const double tol = ctx.cfg.get_double("verify.tol", 1e-10);
    const std::uint64_t seed = ctx.stage_seed(kStageVerify);
    const fs::path path = ctx.artifact("bounds", "bounds.csv");
    std::ofstream os = ctx.open(path);
    os << "case_id,lhs,rhs,margin,pass\n";
    int failures = 0;
    int total = 0;
    for (BoundKind kind : {BoundKind::lemma1_quadratic, BoundKind::lemma1_affine, BoundKind::lemma2_quadratic}) {
        for (const BoundCase& bc : bound_sweep(kind, n, Rng(seed).split(static_cast<std::uint64_t>(kind)).seed(), tol)) {
            os << bc.id << ',' << format_double(bc.lhs) << ',' << format_double(bc.rhs) << ','
               << format_double(bc.rhs - bc.lhs) << ',' << (bc.pass ? 1 : 0) << '\n';
            failures += bc.pass ? 0 : 1;
            ++total;
        }
    }
    ctx.note("bounds", path);
    *ctx.out << total - failures << "/" << total << " bound checks hold\n";
    return failures == 0 ? 0 : 1;
}

int cmd_eval(const Context& ctx) {
    const Split data = load_data(ctx);
    const AnchorSet anchors = load_anchor_artifact(ctx);
    const nn::Mlp generator = load_generator(ctx, anchors);
    const SamplerConfig sampler = sampler_config(ctx);
    const Index n = std::min<Index>(ctx.cfg.get_int("eval.n", 1000), data.holdout.size());
    if (n < 2) throw InsufficientDataError("eval: held-out split has fewer than two samples");
    const Index pearson_n = ctx.cfg.get_int("eval.pearson_n", 100);
    const double zero_tol = ctx.cfg.get_double("eval.pearson_zero_tol", 1e-12);

    Rng rng(ctx.stage_seed(kStageEval));
    const Matrix generated = nn::forward_batch(generator, sample_codings(anchors, sampler, rng, n));
    const Matrix real = data.holdout.samples.leftCols(n);
    const Matrix train = data.train.samples.leftCols(std::min(n, data.train.size()));
    const double bandwidth = ctx.cfg.get_double("eval.bandwidth", 0.0) > 0.0 ? ctx.cfg.get_double("eval.bandwidth", 0.0)
                                                                            : median_pairwise_distance(real);
    const double mmd_gen = mmd2(generated, real, bandwidth);
    const double mmd_real = mmd2(train, real, bandwidth);

    Index nonzero = 0;
    const Index checked = std::min(pearson_n, generated.cols());
    for (Index i = 0; i < checked; ++i) {
        if (pearson_nn(generated.col(i), data.train.samples).second > zero_tol) ++nonzero;
    }

    const fs::path path = ctx.artifact("metrics", "metrics.csv");
    {
        std::ofstream os = ctx.open(path);
        os << "metric,value\n";
        os << "bandwidth," << format_double(bandwidth) << '\n';
        os << "mmd2," << format_double(mmd_gen) << '\n';
        os << "mmd2_real_halves," << format_double(mmd_real) << '\n';
        os << "mmd2_threshold," << format_double(2.0 * mmd_real) << '\n';
        os << "pearson_nonzero_fraction,"
           << format_double(checked > 0 ? static_cast<double>(nonzero) / static_cast<double>(checked) : 0.0) << '\n';
    }
    save_picture(ctx, ctx.artifact("eval_image", "eval_samples.pgm"), generated, real);
    ctx.note("metrics", path);
    *ctx.out << "mmd2: " << format_double(mmd_gen) << "  (real halves: " << format_double(mmd_real) << ")\n";
    return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Local coordinate coding for generative models"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_dir;
    std::vector<std::string> overrides;
    std::optional<long long> n_flag, d_flag, iters_flag, steps_flag, cases_flag;

    using Handler = std::function<int(const Context&)>;
    std::map<std::string, Handler> handlers;
    auto add = [&](const std::string& name, const std::string& help, Handler h) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("-c,--config", config_path, "INI configuration file");
        sub->add_option("--seed", seed, "Global seed (overrides the config 'seed' key)");
        sub->add_option("-o,--out", out_dir, "Output directory (overrides output.dir)");
        sub->add_option("--set", overrides, "Override a config key: section.key=value");
        handlers[name] = std::move(h);
        return sub;
    };
    add("train-ae", "Train the autoencoder and export latent embeddings", cmd_train_ae);
    add("learn-lcc", "Learn anchor points on the embeddings", cmd_learn_lcc);
    add("train-gan", "Train the generator on LCC-sampled codings", cmd_train_gan)
        ->add_option("--iters", iters_flag, "Training iterations (gan.iters)");
    CLI::App* sample = add("sample", "Sample codings and generator outputs", cmd_sample);
    sample->add_option("--n", n_flag, "Number of samples (sample.n)");
    sample->add_option("--d", d_flag, "Neighborhood size (sampler.d)");
    CLI::App* interp = add("interpolate", "Interpolate two codings in one local coordinate system", cmd_interpolate);
    interp->add_option("--steps", steps_flag, "Number of codings on the path (interpolate.steps)");
    interp->add_option("--d", d_flag, "Neighborhood size (sampler.d)");
    add("verify-bounds", "Check the generator approximation bounds on random smooth maps", cmd_verify_bounds)
        ->add_option("--cases", cases_flag, "Cases per sweep (verify.cases)");
    add("eval", "MMD and Pearson nearest-neighbour report", cmd_eval)->add_option("--n", n_flag, "Evaluation samples (eval.n)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        Context ctx;
        ctx.cfg = config_path.empty() ? Config() : Config::from_file(config_path);
        for (const auto& o : overrides) ctx.cfg.apply_override(o);
        const std::string name = app.get_subcommands().front()->get_name();
        if (n_flag) ctx.cfg.set(name == "eval" ? "eval.n" : "sample.n", std::to_string(*n_flag));
        if (d_flag) ctx.cfg.set("sampler.d", std::to_string(*d_flag));
        if (iters_flag) ctx.cfg.set("gan.iters", std::to_string(*iters_flag));
        if (steps_flag) ctx.cfg.set("interpolate.steps", std::to_string(*steps_flag));
        if (cases_flag) ctx.cfg.set("verify.cases", std::to_string(*cases_flag));
        ctx.seed = seed ? *seed : ctx.cfg.get_u64("seed", 0);
        ctx.out_dir = out_dir.empty() ? fs::path(ctx.cfg.get_string("output.dir", "out")) : fs::path(out_dir);
        ctx.out = &out;
        fs::create_directories(ctx.out_dir);
        return handlers.at(name)(ctx);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace lcc::cli
