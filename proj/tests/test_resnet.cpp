#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rac/errors.hpp"
#include "test_util.hpp"

using namespace rac;
using test_util::random_spec;
using test_util::random_weights;
using test_util::random_vec;

namespace {

WeightVector zero_weights(const ResNetSpec& spec) {
    return WeightVector(std::make_shared<const WeightLayout>(spec));
}

}  // namespace

TEST_CASE("spec validation") {
    CHECK_THROWS_AS(ResNetSpec{}.validate(), DimensionError);

    ResNetSpec bad = ResNetSpec::uniform(3, 2, 1, 4, Activation::Tanh, true);
    bad.blocks[1].widths.back() = 2;  // block no longer ends at io_dim
    CHECK_THROWS_AS(bad.validate(), DimensionError);

    ResNetSpec good = ResNetSpec::uniform(3, 2, 1, 4, Activation::Tanh, true);
    CHECK_NOTHROW(good.validate());
}

TEST_CASE("total weight count matches the width products") {
    // Two blocks of widths [3,4,3]: 2 * (3*4 + 4*3) = 48.
    const ResNetSpec spec = ResNetSpec::uniform(3, 2, 1, 4, Activation::Tanh, true);
    CHECK(spec.total_weight_count() == 48);

    // The benchmark default: 20 blocks, one hidden layer, all widths 10.
    const ResNetSpec paper = ResNetSpec::uniform(10, 20, 1, 10, Activation::Tanh, true);
    CHECK(paper.total_weight_count() == 4000);
}

TEST_CASE("layout slices form a strictly increasing partition") {
    Rng rng(3);
    for (int trial = 0; trial < 10; ++trial) {
        const ResNetSpec spec = random_spec(rng, 3, 2, 5, true);
        const WeightLayout layout(spec);
        std::int64_t expected_offset = 0;
        for (const WeightSlice& s : layout.slices()) {
            CHECK(s.offset == expected_offset);
            CHECK(s.size() > 0);
            expected_offset += s.size();
        }
        CHECK(expected_offset == layout.total());
        CHECK(layout.total() == spec.total_weight_count());
    }
}

TEST_CASE("weight matrices round trip through the flat vector") {
    Rng rng(5);
    const ResNetSpec spec = random_spec(rng, 3, 2, 4, true);
    WeightVector w = random_weights(spec, rng, -1, 1);
    for (int p = 0; p < spec.num_blocks(); ++p) {
        for (int j = 0; j <= spec.blocks[p].hidden_layers(); ++j) {
            const Mat m = w.matrix(p, j);
            const WeightSlice& s = w.layout().slice(p, j);
            CHECK(vec(m) == w.flat().segment(s.offset, s.size()));
            CHECK(unvec(vec(m), s.rows, s.cols) == m);
        }
    }
}

TEST_CASE("block_forward: zero weights give zero output") {
    const ResNetSpec spec = ResNetSpec::uniform(4, 1, 2, 6, Activation::Tanh, true);
    const WeightVector w = zero_weights(spec);
    Rng rng(17);
    const Vec out = block_forward(spec, w, 0, random_vec(rng, 4, -3, 3));
    CHECK(out.norm() == 0.0);
}

TEST_CASE("block_forward: scalar two-matrix composition by hand") {
    const ResNetSpec spec = ResNetSpec::uniform(1, 1, 1, 1, Activation::Tanh, true);
    WeightVector w = zero_weights(spec);
    w.matrix(0, 0)(0, 0) = 2.0;
    w.matrix(0, 1)(0, 0) = 3.0;
    Vec eta(1);
    eta << 0.5;
    BlockCache cache;
    const Vec out = block_forward(spec, w, 0, eta, &cache);
    CHECK(out[0] == doctest::Approx(3.0 * std::tanh(1.0)).epsilon(1e-14));
    CHECK(cache.act[0][0] == doctest::Approx(std::tanh(1.0)).epsilon(1e-14));
    CHECK(cache.act_deriv[0][0] ==
          doctest::Approx(1.0 - std::tanh(1.0) * std::tanh(1.0)).epsilon(1e-14));
}

TEST_CASE("block_forward: tanh keeps outputs within the last weight's reach") {
    const ResNetSpec spec = ResNetSpec::uniform(10, 1, 1, 10, Activation::Tanh, true);
    Rng rng(23);
    const WeightVector w = random_weights(spec, rng, -2, 2);
    const Vec out = block_forward(spec, w, 0, random_vec(rng, 10, -50, 50));
    CHECK(out.allFinite());
    CHECK(out.norm() <= w.matrix(0, 1).norm() * std::sqrt(10.0) + 1e-12);
}

TEST_CASE("block_forward rejects mismatched input lengths") {
    const ResNetSpec spec = ResNetSpec::uniform(3, 1, 1, 3, Activation::Tanh, true);
    const WeightVector w = zero_weights(spec);
    CHECK_THROWS_AS(block_forward(spec, w, 0, Vec::Zero(4)), DimensionError);
}

TEST_CASE("resnet_forward: zero weights collapse to identity with shortcuts") {
    const ResNetSpec spec = ResNetSpec::uniform(5, 4, 1, 7, Activation::Tanh, true);
    const WeightVector w = zero_weights(spec);
    Rng rng(29);
    for (int trial = 0; trial < 5; ++trial) {
        const Vec x = random_vec(rng, 5, -10, 10);
        CHECK(resnet_forward(spec, w, x) == x);
    }
}

TEST_CASE("resnet_forward: zero weights collapse to zero without shortcuts") {
    const ResNetSpec spec = ResNetSpec::uniform(5, 4, 1, 7, Activation::Tanh, false);
    const WeightVector w = zero_weights(spec);
    Rng rng(31);
    const Vec x = random_vec(rng, 5, -10, 10);
    CHECK(resnet_forward(spec, w, x).norm() == 0.0);
}

TEST_CASE("resnet_forward: two-block scalar recursion by hand") {
    const ResNetSpec spec = ResNetSpec::uniform(1, 2, 1, 1, Activation::Tanh, true);
    WeightVector w = zero_weights(spec);
    w.matrix(0, 0)(0, 0) = 0.8;
    w.matrix(0, 1)(0, 0) = 1.2;
    w.matrix(1, 0)(0, 0) = -0.5;
    w.matrix(1, 1)(0, 0) = 0.7;
    Vec x(1);
    x << 0.3;

    const double eta2 = 0.3 + 1.2 * std::tanh(0.8 * 0.3);
    const double expect = eta2 + 0.7 * std::tanh(-0.5 * eta2);

    ForwardCache cache;
    const Vec out = resnet_forward(spec, w, x, &cache);
    CHECK(out[0] == doctest::Approx(expect).epsilon(1e-14));
    CHECK(cache.blocks[0].input[0] == 0.3);
    CHECK(cache.blocks[1].input[0] == doctest::Approx(eta2).epsilon(1e-14));

    // Without shortcuts the same weights give the bare composition.
    ResNetSpec plain = spec;
    plain.shortcut_enabled = false;
    const double comp = 0.7 * std::tanh(-0.5 * (1.2 * std::tanh(0.8 * 0.3)));
    CHECK(resnet_forward(plain, w, x)[0] == doctest::Approx(comp).epsilon(1e-14));
}

TEST_CASE("resnet_forward is pure: identical inputs give identical bits") {
    Rng rng(37);
    const ResNetSpec spec = random_spec(rng, 3, 2, 5, true);
    const WeightVector w = random_weights(spec, rng, -0.5, 0.5);
    const Vec x = random_vec(rng, spec.io_dim, -2, 2);
    const Vec a = resnet_forward(spec, w, x);
    const Vec b = resnet_forward(spec, w, x);
    CHECK(a == b);
}

TEST_CASE("resnet_forward rejects non-finite input") {
    const ResNetSpec spec = ResNetSpec::uniform(2, 1, 1, 2, Activation::Tanh, true);
    const WeightVector w = zero_weights(spec);
    Vec x(2);
    x << 1.0, std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(resnet_forward(spec, w, x), NumericError);
}

TEST_CASE("init_weights: entries stay in range and honor the seed") {
    const ResNetSpec spec = ResNetSpec::uniform(3, 2, 1, 4, Activation::Tanh, true);
    auto layout = std::make_shared<const WeightLayout>(spec);

    Rng a(42), b(42), c(43);
    const WeightVector wa = init_weights(layout, a, -0.05, 0.05);
    const WeightVector wb = init_weights(layout, b, -0.05, 0.05);
    const WeightVector wc = init_weights(layout, c, -0.05, 0.05);
    CHECK(wa.flat() == wb.flat());
    CHECK(wa.flat() != wc.flat());
    CHECK(wa.flat().minCoeff() >= -0.05);
    CHECK(wa.flat().maxCoeff() < 0.05);
}

TEST_CASE("init_weights: sample mean of 1e5 draws is within 3 sigma of zero") {
    // One long block so the flat vector holds 1e5 entries: widths [1, 1e5, 1].
    ResNetSpec spec;
    spec.io_dim = 1;
    BlockSpec b;
    b.widths = {1, 100000, 1};
    b.activations = {Activation::Tanh};
    spec.blocks.push_back(b);
    spec.validate();
    auto layout = std::make_shared<const WeightLayout>(spec);
    Rng rng(12345);
    const WeightVector w = init_weights(layout, rng, -0.05, 0.05);
    REQUIRE(w.flat().size() == 200000);
    const double mean = w.flat().head(100000).mean();
    const double sigma_mean = (0.1 / std::sqrt(12.0)) / std::sqrt(100000.0);
    CHECK(std::abs(mean) <= 3.0 * sigma_mean);
}

TEST_CASE("init_weights requires low < high") {
    const ResNetSpec spec = ResNetSpec::uniform(2, 1, 1, 2, Activation::Tanh, true);
    auto layout = std::make_shared<const WeightLayout>(spec);
    Rng rng(1);
    CHECK_THROWS_AS(init_weights(layout, rng, 0.1, 0.1), DimensionError);
}
