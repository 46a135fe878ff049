#include "lcc/sampling.hpp"

#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <sstream>

using namespace lcc;

namespace {

AnchorSet random_anchors(Index dim, Index m, std::uint64_t seed) {
    Rng rng(seed);
    Matrix V(dim, m);
    for (Index k = 0; k < V.size(); ++k) V(k) = rng.normal();
    return AnchorSet(V);
}

AnchorSet square() {
    Matrix V(2, 4);
    V << 0, 1, 0, 1,
         0, 0, 1, 1;
    return AnchorSet(V);
}

}  // namespace

TEST_CASE("knn") {
    const AnchorSet a = random_anchors(3, 10, 1);
    CHECK(knn(a.anchor(3), a, 4).front() == 3);

    Matrix V(2, 2);
    V << -1, 1, 0, 0;
    CHECK(knn(Vector::Zero(2), AnchorSet(V), 1) == std::vector<Index>{0});

    CHECK_THROWS_AS(knn(Vector::Zero(3), a, 11), DimensionError);
    CHECK_THROWS_AS(knn(Vector::Zero(2), a, 2), DimensionError);
}

TEST_CASE("knn matches an exhaustive sort") {
    const AnchorSet a = random_anchors(2, 16, 11);
    Rng rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        const Vector q{{rng.normal(), rng.normal()}};
        std::vector<std::pair<double, Index>> all;
        for (Index j = 0; j < 16; ++j) all.emplace_back((a.anchor(j) - q).squaredNorm(), j);
        std::sort(all.begin(), all.end());
        std::vector<Index> expect;
        for (int k = 0; k < 4; ++k) expect.push_back(all[static_cast<std::size_t>(k)].second);
        CHECK(knn(q, a, 4) == expect);
    }
}

TEST_CASE("one-neighbor sampling is one-hot at the center") {
    const AnchorSet a = random_anchors(2, 7, 2);
    SamplerConfig c;
    c.d = 1;
    Rng rng(5);
    for (int i = 0; i < 200; ++i) {
        const Coding g = sample_coding(a, c, rng);
        CHECK(g.nnz() == 1);
        CHECK(g.sum() == 1.0);
    }
    Rng again(5);
    CHECK(sample_coding_at(a, 4, c, again).weights == Coding::one_hot(7, 4).weights);
}

TEST_CASE("accepted samples sum to one with at most d nonzeros") {
    const AnchorSet a = random_anchors(3, 12, 3);
    Rng rng(8);
    for (Index d = 1; d <= 12; ++d) {
        SamplerConfig c;
        c.d = d;
        for (int i = 0; i < 200; ++i) {
            const Coding g = sample_coding(a, c, rng);
            CHECK(std::abs(g.sum() - 1.0) <= 1e-12);
            CHECK(g.nnz() <= d);
        }
    }
}

TEST_CASE("sampling on the unit square picks the nearest corner") {
    SamplerConfig c;
    c.d = 2;
    Rng rng(42);
    const Coding g = sample_coding_at(square(), 0, c, rng);
    // corners 1 and 2 are equidistant from corner 0, the tie goes to 1
    CHECK(g.support() == std::vector<Index>{0, 1});
    CHECK(neighborhood(square(), 3, 3) == std::vector<Index>{3, 1, 2});
}

TEST_CASE("sampling is deterministic per seed") {
    const AnchorSet a = random_anchors(2, 16, 4);
    SamplerConfig c;
    c.d = 3;
    Rng r1(99), r2(99);
    CHECK(sample_codings(a, c, r1, 50) == sample_codings(a, c, r2, 50));
}

TEST_CASE("redraw budget exhaustion is an error") {
    SamplerConfig c;
    c.d = 2;
    c.min_abs_sum = 1e300;
    c.max_redraws = 3;
    Rng rng(1);
    CHECK_THROWS_AS(sample_coding(square(), c, rng), DegenerateCodingError);
    c = SamplerConfig{};
    c.d = 5;
    CHECK_THROWS_AS(c.validate(4), ConfigError);
}

TEST_CASE("interpolate") {
    const Coding a(Vector{{1.0, 0.0}});
    const Coding b(Vector{{0.0, 1.0}});
    const auto path = interpolate(a, b, 3);
    REQUIRE(path.size() == 3);
    CHECK(path.front().weights == a.weights);
    CHECK(path.back().weights == b.weights);
    CHECK(path[1].weights == Vector{{0.5, 0.5}});
    CHECK(path[1].sum() == 1.0);

    const Coding c(Vector{{0.3, -0.1, 0.8}});
    const Coding d(Vector{{-2.0, 1.5, 1.5}});
    const auto long_path = interpolate(c, d, 10);
    CHECK(long_path.front().weights == c.weights);
    CHECK(long_path.back().weights == d.weights);
    for (const auto& g : long_path) CHECK(std::abs(g.sum() - 1.0) <= 1e-12);

    // supports stay inside the union of the endpoint supports
    const AnchorSet anchors = random_anchors(2, 10, 12);
    SamplerConfig sc;
    sc.d = 3;
    Rng rng(12);
    for (int trial = 0; trial < 50; ++trial) {
        const Coding x = sample_coding(anchors, sc, rng);
        const Coding y = sample_coding(anchors, sc, rng);
        for (const auto& g : interpolate(x, y, 7))
            for (Index j : g.support()) CHECK((x.weights(j) != 0.0 || y.weights(j) != 0.0));
    }

    CHECK_THROWS_AS(interpolate(a, Coding(Vector::Ones(3) / 3.0), 3), DimensionError);
    CHECK_THROWS_AS(interpolate(a, b, 1), ConfigError);
}

TEST_CASE("codings csv round trip") {
    const AnchorSet a = random_anchors(2, 9, 6);
    SamplerConfig c;
    c.d = 3;
    Rng rng(6);
    std::vector<Coding> codings;
    for (int i = 0; i < 20; ++i) codings.push_back(sample_coding(a, c, rng));
    std::ostringstream os;
    write_codings_csv(os, codings);
    std::istringstream is(os.str());
    const auto back = read_codings_csv(is, 9);
    REQUIRE(back.size() == codings.size());
    for (std::size_t i = 0; i < back.size(); ++i) CHECK(back[i].weights == codings[i].weights);

    std::istringstream bad("3:0.5,12:0.5\n");
    CHECK_THROWS_WITH_AS(read_codings_csv(bad, 9), doctest::Contains("12:0.5"), Error);
}
