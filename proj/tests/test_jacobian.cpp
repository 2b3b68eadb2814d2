#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "rac/errors.hpp"
#include "test_util.hpp"

using namespace rac;
using test_util::random_spec;
using test_util::random_weights;
using test_util::random_vec;
using test_util::rel_error;

namespace {

WeightVector zero_weights(const ResNetSpec& spec) {
    return WeightVector(std::make_shared<const WeightLayout>(spec));
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

TEST_CASE("scalar chain rule by hand") {
    // One block, widths [1,1,1], V0 = 2, V1 = 3, input 0.5. The output is
    // 3*tanh(2*0.5), so d/dV1 = tanh(1) and d/dV0 = 3*sech^2(1)*0.5.
    const ResNetSpec spec = ResNetSpec::uniform(1, 1, 1, 1, Activation::Tanh, true);
    WeightVector w = zero_weights(spec);
    w.matrix(0, 0)(0, 0) = 2.0;
    w.matrix(0, 1)(0, 0) = 3.0;
    Vec eta(1);
    eta << 0.5;
    BlockCache cache;
    block_forward(spec, w, 0, eta, &cache);

    const double sech2 = 1.0 - std::tanh(1.0) * std::tanh(1.0);
    const Mat lambda = block_weight_jacobian(spec, w, 0, cache);
    REQUIRE(lambda.rows() == 1);
    REQUIRE(lambda.cols() == 2);
    CHECK(lambda(0, 0) == doctest::Approx(3.0 * sech2 * 0.5).epsilon(1e-14));
    CHECK(lambda(0, 1) == doctest::Approx(std::tanh(1.0)).epsilon(1e-14));

    const Mat xi = block_input_jacobian(spec, w, 0, cache);
    CHECK(xi(0, 0) == doctest::Approx(3.0 * sech2 * 2.0).epsilon(1e-14));
}

TEST_CASE("zero weights collapse every block Jacobian") {
    const ResNetSpec spec = ResNetSpec::uniform(3, 2, 1, 4, Activation::Tanh, true);
    const WeightVector w = zero_weights(spec);
    Rng rng(3);
    ForwardCache cache;
    resnet_forward(spec, w, random_vec(rng, 3, -2, 2), &cache);

    for (int p = 0; p < spec.num_blocks(); ++p) {
        CHECK(block_weight_jacobian(spec, w, p, cache.blocks[p]).norm() == 0.0);
        CHECK(block_input_jacobian(spec, w, p, cache.blocks[p]).norm() == 0.0);
    }
}

TEST_CASE("block Jacobians match finite differences on a random block") {
    Rng rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        // Single-block specs so the full-network oracle exercises the block
        // formulas directly.
        const ResNetSpec spec = random_spec(rng, 1, 2, 3, false);
        const WeightVector w = random_weights(spec, rng, -0.8, 0.8);
        const Vec x = random_vec(rng, spec.io_dim, -1, 1);
        ForwardCache cache;
        resnet_forward(spec, w, x, &cache);

        const Mat lambda = block_weight_jacobian(spec, w, 0, cache.blocks[0]);
        const Mat fd = finite_diff_jacobian(spec, w, x, 1e-6);
        CHECK(rel_error(lambda, fd) < 1e-6);

        // Input Jacobian against central differences over the input.
        const Mat xi = block_input_jacobian(spec, w, 0, cache.blocks[0]);
        Mat fd_in(spec.io_dim, spec.io_dim);
        const double h = 1e-6;
        for (int i = 0; i < spec.io_dim; ++i) {
            Vec xp = x, xm = x;
            xp[i] += h;
            xm[i] -= h;
            fd_in.col(i) = (block_forward(spec, w, 0, xp) - block_forward(spec, w, 0, xm)) /
                           (2.0 * h);
        }
        CHECK(rel_error(xi, fd_in) < 1e-6);
    }
}

TEST_CASE("full Jacobian matches finite differences on random networks") {
    Rng rng(7);
    int checked = 0;
    while (checked < 20) {
        const bool shortcut = rng.uniform() < 0.5;
        const ResNetSpec spec = random_spec(rng, 3, 2, 4, shortcut);
        if (spec.total_weight_count() > 200) continue;
        ++checked;
        const WeightVector w = random_weights(spec, rng, -1.0, 1.0);
        const Vec x = random_vec(rng, spec.io_dim, -1.5, 1.5);
        ForwardCache cache;
        resnet_forward(spec, w, x, &cache);
        const Mat analytic = resnet_jacobian(spec, w, cache);
        const Mat fd = finite_diff_jacobian(spec, w, x, 1e-6);
        CHECK(rel_error(analytic, fd) < 1e-5);
    }
}

TEST_CASE("finite differences are step-robust on random small nets") {
    Rng rng(9);
    for (int trial = 0; trial < 5; ++trial) {
        const ResNetSpec spec = random_spec(rng, 2, 1, 3, true);
        const WeightVector w = random_weights(spec, rng, -0.5, 0.5);
        const Vec x = random_vec(rng, spec.io_dim, -1, 1);
        const Mat a = finite_diff_jacobian(spec, w, x, 1e-6);
        const Mat b = finite_diff_jacobian(spec, w, x, 1e-7);
        CHECK((a - b).cwiseAbs().maxCoeff() < 1e-6);
    }
}

TEST_CASE("identity activation makes the network linear and the oracle exact") {
    // out = V1^T V0^T x, so every derivative is independent of the step.
    const ResNetSpec spec = ResNetSpec::uniform(2, 1, 1, 3, Activation::Identity, false);
    Rng rng(11);
    const WeightVector w = random_weights(spec, rng, -1, 1);
    const Vec x = random_vec(rng, 2, -1, 1);

    const Mat coarse = finite_diff_jacobian(spec, w, x, 1e-3);
    const Mat fine = finite_diff_jacobian(spec, w, x, 1e-6);
    CHECK((coarse - fine).cwiseAbs().maxCoeff() < 1e-9);

    ForwardCache cache;
    resnet_forward(spec, w, x, &cache);
    CHECK(rel_error(resnet_jacobian(spec, w, cache), fine) < 1e-9);
}

TEST_CASE("last block slice equals its standalone block Jacobian in both modes") {
    Rng rng(13);
    for (const bool shortcut : {true, false}) {
        const ResNetSpec spec = random_spec(rng, 3, 2, 4, shortcut);
        const WeightVector w = random_weights(spec, rng, -0.6, 0.6);
        const Vec x = random_vec(rng, spec.io_dim, -1, 1);
        ForwardCache cache;
        resnet_forward(spec, w, x, &cache);
        const Mat full = resnet_jacobian(spec, w, cache);
        const int last = spec.num_blocks() - 1;
        const Mat slice = full.middleCols(w.layout().block_offset(last),
                                          w.layout().block_size(last));
        const Mat lambda = block_weight_jacobian(spec, w, last, cache.blocks[last]);
        CHECK((slice - lambda).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("one-block networks have identical weight Jacobians in both modes") {
    Rng rng(15);
    const ResNetSpec with = random_spec(rng, 1, 2, 4, true);
    ResNetSpec without = with;
    without.shortcut_enabled = false;
    Rng wrng(16);
    const WeightVector w = random_weights(with, wrng, -0.7, 0.7);
    const Vec x = random_vec(rng, with.io_dim, -1, 1);

    ForwardCache ca, cb;
    resnet_forward(with, w, x, &ca);
    resnet_forward(without, w, x, &cb);
    const Mat ja = resnet_jacobian(with, w, ca);
    const Mat jb = resnet_jacobian(without, w, cb);
    CHECK((ja - jb).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("without shortcuts, zero weights kill every upstream slice") {
    const ResNetSpec spec = ResNetSpec::uniform(3, 4, 1, 3, Activation::Tanh, false);
    const WeightVector w = zero_weights(spec);
    Rng rng(17);
    ForwardCache cache;
    resnet_forward(spec, w, random_vec(rng, 3, -2, 2), &cache);
    const Mat jac = resnet_jacobian(spec, w, cache);
    for (int p = 0; p + 1 < spec.num_blocks(); ++p) {
        CHECK(jac.middleCols(w.layout().block_offset(p), w.layout().block_size(p)).norm() ==
              0.0);
    }
}

TEST_CASE("gradient_norm_profile: zero weights zero the whole profile") {
    for (const bool shortcut : {true, false}) {
        const ResNetSpec spec = ResNetSpec::uniform(3, 4, 1, 3, Activation::Tanh, shortcut);
        const WeightVector w = zero_weights(spec);
        Rng rng(19);
        const Vec profile = gradient_norm_profile(spec, w, random_vec(rng, 3, -2, 2));
        REQUIRE(profile.size() == 4);
        CHECK(profile.maxCoeff() == 0.0);
    }
}

TEST_CASE("gradient_norm_profile: shortcuts keep early blocks alive") {
    // Benchmark geometry at small draw count; the acceptance suite runs the
    // full 100-draw version.
    const ResNetSpec with = ResNetSpec::uniform(10, 20, 1, 10, Activation::Tanh, true);
    ResNetSpec without = with;
    without.shortcut_enabled = false;
    auto layout = std::make_shared<const WeightLayout>(with);

    const int draws = 10;
    std::vector<std::vector<double>> on(10), off(10);
    Rng rng(21);
    for (int d = 0; d < draws; ++d) {
        Rng wrng(1000 + static_cast<std::uint64_t>(d));
        const WeightVector w = init_weights(layout, wrng, -0.05, 0.05);
        const Vec x = random_vec(rng, 10, 0, 2);
        const Vec p_on = gradient_norm_profile(with, w, x);
        const Vec p_off = gradient_norm_profile(without, w, x);
        for (int p = 0; p < 10; ++p) {
            on[p].push_back(p_on[p]);
            off[p].push_back(p_off[p]);
        }
    }
    for (int p = 0; p < 10; ++p) {
        CHECK(median(on[p]) >= 10.0 * median(off[p]));
    }
}

TEST_CASE("cache and spec mismatches are rejected") {
    const ResNetSpec spec = ResNetSpec::uniform(3, 2, 1, 4, Activation::Tanh, true);
    const ResNetSpec other = ResNetSpec::uniform(3, 2, 2, 4, Activation::Tanh, true);
    const WeightVector w = zero_weights(spec);
    Rng rng(23);
    ForwardCache cache;
    resnet_forward(other, WeightVector(std::make_shared<const WeightLayout>(other)),
                   random_vec(rng, 3, -1, 1), &cache);
    CHECK_THROWS_AS(block_weight_jacobian(spec, w, 0, cache.blocks[0]), DimensionError);
    CHECK_THROWS_AS(resnet_jacobian(spec, w, cache), DimensionError);
}

TEST_CASE("finite_diff_jacobian requires a positive step") {
    const ResNetSpec spec = ResNetSpec::uniform(2, 1, 1, 2, Activation::Tanh, true);
    const WeightVector w = zero_weights(spec);
    CHECK_THROWS_AS(finite_diff_jacobian(spec, w, Vec::Zero(2), 0.0), DimensionError);
}
