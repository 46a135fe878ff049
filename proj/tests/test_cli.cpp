#include "lcc/anchor_io.hpp"
#include "lcc/binary_io.hpp"
#include "lcc/cli/commands.hpp"
#include "lcc/neural/gan.hpp"
#include "lcc/sampling.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace lcc;
namespace fs = std::filesystem;

namespace {

fs::path workdir() {
    const char* env = std::getenv("LCC_TEST_TMP");
    return env ? fs::path(env) : fs::temp_directory_path() / "lcc_cli_test";
}

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

// Small but complete pipeline configuration.
fs::path write_config(const fs::path& dir) {
    fs::create_directories(dir);
    const fs::path p = dir / "small.ini";
    std::ofstream f(p);
    f << "seed = 3\n"
         "[data]\nkind = ring\nn = 200\nnoise = 0.01\nholdout = 0.5\n"
         "[autoencoder]\nlatent_dim = 2\nhidden = 8\nepochs = 5\n"
         "[lcc]\nm = 6\nmax_outer_iters = 5\n"
         "[sampler]\nd = 2\n"
         "[gan]\niters = 20\nbatch = 16\ngenerator_hidden = 8\ndiscriminator_hidden = 8\n"
         "[eval]\nn = 50\npearson_n = 10\n"
         "[output]\ndir = " << (dir / "out").string() << "\n";
    return p;
}

}  // namespace

TEST_CASE("pipeline subcommands") {
    const fs::path dir = workdir() / "pipeline";
    fs::remove_all(dir);
    const std::string cfg = write_config(dir).string();
    const fs::path out = dir / "out";

    REQUIRE(run({"train-ae", "-c", cfg}).code == 0);
    CHECK(fs::exists(out / "encoder.bin"));
    CHECK(fs::exists(out / "embeddings.csv"));

    REQUIRE(run({"learn-lcc", "-c", cfg}).code == 0);
    const AnchorSet anchors = load_anchors((out / "anchors.bin").string());
    CHECK(anchors.m() == 6);
    const std::string objective = slurp(out / "lcc_objective.csv");
    CHECK(objective.rfind("iter,objective\n", 0) == 0);

    SUBCASE("zero iterations checkpoint the initialization") {
        REQUIRE(run({"train-gan", "-c", cfg, "--iters", "0"}).code == 0);
        const nn::Mlp g = nn::load_mlp((out / "generator.bin").string());
        const nn::GanModel init = nn::make_gan(6, 2, nn::Phi::log, nn::GanArch{{8}, {8}, nn::Activation::identity},
                                               nn::AdamParams{}, Rng(3).split(4).seed());
        CHECK(g == init.generator);
        CHECK(nn::load_mlp((out / "discriminator.bin").string()) == init.discriminator);
        CHECK(slurp(out / "gan_loss.csv") == "iter,d_loss,g_loss\n");
    }

    SUBCASE("downstream commands") {
        REQUIRE(run({"train-gan", "-c", cfg}).code == 0);
        const std::string loss = slurp(out / "gan_loss.csv");
        CHECK(std::count(loss.begin(), loss.end(), '\n') == 21);

        REQUIRE(run({"sample", "-c", cfg, "--d", "1", "--n", "40"}).code == 0);
        std::ifstream codings(out / "codings.csv");
        const auto list = read_codings_csv(codings, 6);
        CHECK(list.size() == 40);
        for (const Coding& c : list) {
            CHECK(c.nnz() == 1);
            CHECK(c.sum() == 1.0);
        }
        CHECK(slurp(out / "samples.pgm").rfind("P5\n", 0) == 0);

        REQUIRE(run({"interpolate", "-c", cfg, "--steps", "5"}).code == 0);
        std::ifstream path(out / "interp_codings.csv");
        const auto steps = read_codings_csv(path, 6);
        REQUIRE(steps.size() == 5);
        CHECK(steps.front().support() == steps.back().support());

        const Result ev = run({"eval", "-c", cfg});
        REQUIRE(ev.code == 0);
        const std::string metrics = slurp(out / "metrics.csv");
        CHECK(metrics.find("\nmmd2,") != std::string::npos);
        CHECK(metrics.find("\npearson_nonzero_fraction,") != std::string::npos);

        // a generator trained for another anchor count is rejected
        REQUIRE(run({"learn-lcc", "-c", cfg, "--set", "lcc.m=5"}).code == 0);
        const Result bad = run({"sample", "-c", cfg});
        CHECK(bad.code != 0);
        CHECK(bad.err.find("anchor count") != std::string::npos);
    }
}

TEST_CASE("reruns are byte identical") {
    const fs::path dir = workdir() / "repeat";
    fs::remove_all(dir);
    const std::string cfg = write_config(dir).string();
    const fs::path out = dir / "out";
    REQUIRE(run({"train-ae", "-c", cfg}).code == 0);
    REQUIRE(run({"learn-lcc", "-c", cfg}).code == 0);
    const std::string first = slurp(out / "lcc_codings.csv") + slurp(out / "lcc_objective.csv");
    const std::string emb = slurp(out / "embeddings.csv");
    REQUIRE(run({"train-ae", "-c", cfg}).code == 0);
    REQUIRE(run({"learn-lcc", "-c", cfg}).code == 0);
    CHECK(slurp(out / "embeddings.csv") == emb);
    CHECK(slurp(out / "lcc_codings.csv") + slurp(out / "lcc_objective.csv") == first);

    REQUIRE(run({"train-ae", "-c", cfg, "--seed", "4"}).code == 0);
    CHECK(slurp(out / "embeddings.csv") != emb);
}

TEST_CASE("verify-bounds") {
    const fs::path dir = workdir() / "bounds";
    fs::remove_all(dir);
    const Result r = run({"verify-bounds", "-o", dir.string(), "--cases", "40"});
    CHECK(r.code == 0);
    const std::string csv = slurp(dir / "bounds.csv");
    CHECK(csv.rfind("case_id,lhs,rhs,margin,pass\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 121);
    CHECK(csv.find(",0\n") == std::string::npos);
}

TEST_CASE("diagnostics") {
    const fs::path dir = workdir() / "errors";
    fs::remove_all(dir);
    const std::string cfg = write_config(dir).string();

    const Result missing_key = run({"train-ae", "-c", cfg, "--set", "data.kind=csv"});
    CHECK(missing_key.code != 0);
    CHECK(missing_key.err.find("data.path") != std::string::npos);

    const Result bad_value = run({"train-ae", "-c", cfg, "--set", "autoencoder.epochs=many"});
    CHECK(bad_value.code != 0);
    CHECK(bad_value.err.find("autoencoder.epochs") != std::string::npos);

    const Result no_anchors = run({"sample", "-c", cfg});
    CHECK(no_anchors.code != 0);
    CHECK(no_anchors.err.find("anchors.bin") != std::string::npos);

    fs::create_directories(dir / "out");
    std::ofstream(dir / "out" / "anchors.bin", std::ios::binary) << "LCCA\x02";
    const Result corrupt = run({"sample", "-c", cfg});
    CHECK(corrupt.code != 0);
    CHECK(corrupt.err.find("anchors.bin") != std::string::npos);
    CHECK(corrupt.err.find("offset") != std::string::npos);

    const Result escape = run({"train-ae", "-c", cfg, "--set", "output.encoder=../enc.bin"});
    CHECK(escape.code != 0);
    CHECK(escape.err.find("output.encoder") != std::string::npos);
    CHECK_FALSE(fs::exists(dir / "enc.bin"));

    const Result absolute = run({"train-ae", "-c", cfg, "--set", "output.encoder=/tmp/enc.bin"});
    CHECK(absolute.code != 0);

    CHECK(run({"no-such-command"}).code != 0);
    CHECK(run({"train-ae", "-c", (dir / "absent.ini").string()}).code != 0);
}
