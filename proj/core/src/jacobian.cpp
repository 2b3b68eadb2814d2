#include "rac/jacobian.hpp"

#include "rac/errors.hpp"

namespace rac {

namespace {

void check_cache(const ResNetSpec& spec, int block, const BlockCache& cache) {
    const BlockSpec& b = spec.blocks.at(static_cast<std::size_t>(block));
    const int k = b.hidden_layers();
    if (cache.input.size() != b.widths.front() ||
        static_cast<int>(cache.act.size()) != k ||
        static_cast<int>(cache.act_deriv.size()) != k) {
        throw DimensionError("jacobian: cache does not match spec at block " +
                             std::to_string(block));
    }
    for (int j = 0; j < k; ++j) {
        if (cache.act[static_cast<std::size_t>(j)].size() != b.widths[static_cast<std::size_t>(j) + 1]) {
            throw DimensionError("jacobian: cache layer width mismatch at block " +
                                 std::to_string(block));
        }
    }
}

// Fills the weight-Jacobian slices of one block into `out`, whose columns
// [col0, col0 + block size) correspond to the block's weight layout. Every
// slice is premultiplied by `premul` (the downstream factor; identity for a
// standalone block Jacobian). Returns the block's full within-block chain
//
//   Q_0 = V_k^T diag(act'_k) * ... * V_1^T diag(act'_1)
//
// which the caller turns into the block input Jacobian Q_0 * V_0^T.
//
// Slice j itself is  premul * Q_j * (I kron act_j^T)  with act_0 = input;
// the Kronecker factor is applied column-block-wise as outer products. The
// suffix Q_j is built walking j downward, so each layer costs one small
// matrix product.
Mat fill_block_slices(const ResNetSpec& spec, const WeightVector& weights, int block,
                      const BlockCache& cache, const Mat& premul, Eigen::Ref<Mat> out,
                      std::int64_t col0) {
    const BlockSpec& b = spec.blocks.at(static_cast<std::size_t>(block));
    const WeightLayout& layout = weights.layout();
    const int k = b.hidden_layers();

    Mat q = Mat::Identity(b.widths.back(), b.widths.back());
    Mat pre_q = premul;  // premul * Q_j, maintained alongside q
    for (int j = k; j >= 0; --j) {
        const Vec& in_act = (j == 0) ? cache.input : cache.act[static_cast<std::size_t>(j - 1)];
        const WeightSlice& s = layout.slice(block, j);
        multiply_identity_kron_vt(pre_q, in_act,
                                  out.middleCols(col0 + (s.offset - layout.block_offset(block)),
                                                 s.size()));
        if (j > 0) {
            const Mat factor = weights.matrix(block, j).transpose() *
                               cache.act_deriv[static_cast<std::size_t>(j - 1)].asDiagonal();
            q = q * factor;
            pre_q = pre_q * factor;
        }
    }
    return q;
}

}  // namespace

Mat block_weight_jacobian(const ResNetSpec& spec, const WeightVector& weights,
                          int block, const BlockCache& cache) {
    check_cache(spec, block, cache);
    const BlockSpec& b = spec.blocks.at(static_cast<std::size_t>(block));
    Mat out(b.widths.back(), weights.layout().block_size(block));
    const Mat identity = Mat::Identity(b.widths.back(), b.widths.back());
    fill_block_slices(spec, weights, block, cache, identity, out, 0);
    return out;
}

Mat block_input_jacobian(const ResNetSpec& spec, const WeightVector& weights,
                         int block, const BlockCache& cache) {
    check_cache(spec, block, cache);
    const BlockSpec& b = spec.blocks.at(static_cast<std::size_t>(block));
    const int k = b.hidden_layers();
    Mat q = Mat::Identity(b.widths.back(), b.widths.back());
    for (int j = k; j >= 1; --j) {
        q = q * (weights.matrix(block, j).transpose() *
                 cache.act_deriv[static_cast<std::size_t>(j - 1)].asDiagonal());
    }
    return q * weights.matrix(block, 0).transpose();
}

Mat resnet_jacobian(const ResNetSpec& spec, const WeightVector& weights,
                    const ForwardCache& cache) {
    const int m = spec.num_blocks();
    if (static_cast<int>(cache.blocks.size()) != m) {
        throw DimensionError("resnet_jacobian: cache block count mismatch");
    }
    const WeightLayout& layout = weights.layout();
    const int n = spec.io_dim;

    Mat jac(n, layout.total());
    Mat downstream = Mat::Identity(n, n);
    for (int p = m - 1; p >= 0; --p) {
        const BlockCache& bc = cache.blocks[static_cast<std::size_t>(p)];
        check_cache(spec, p, bc);
        const Mat q0 =
            fill_block_slices(spec, weights, p, bc, downstream, jac, layout.block_offset(p));
        if (p > 0) {
            const Mat xi = q0 * weights.matrix(p, 0).transpose();
            downstream = spec.shortcut_enabled ? Mat(downstream * (Mat::Identity(n, n) + xi))
                                               : Mat(downstream * xi);
        }
    }
    return jac;
}

Mat finite_diff_jacobian(const ResNetSpec& spec, const WeightVector& weights,
                         const Vec& x, double step) {
    if (!(step > 0.0)) throw DimensionError("finite_diff_jacobian: step must be positive");
    WeightVector probe(weights.layout_ptr(), weights.flat());
    Mat jac(spec.io_dim, weights.layout().total());
    for (Eigen::Index i = 0; i < probe.flat().size(); ++i) {
        const double saved = probe.flat()[i];
        probe.flat()[i] = saved + step;
        const Vec plus = resnet_forward(spec, probe, x);
        probe.flat()[i] = saved - step;
        const Vec minus = resnet_forward(spec, probe, x);
        probe.flat()[i] = saved;
        jac.col(i) = (plus - minus) / (2.0 * step);
    }
    return jac;
}

Vec gradient_norm_profile(const ResNetSpec& spec, const WeightVector& weights,
                          const Vec& x) {
    ForwardCache cache;
    resnet_forward(spec, weights, x, &cache);
    const Mat jac = resnet_jacobian(spec, weights, cache);
    const WeightLayout& layout = weights.layout();
    Vec norms(spec.num_blocks());
    for (int p = 0; p < spec.num_blocks(); ++p) {
        norms[p] = jac.middleCols(layout.block_offset(p), layout.block_size(p)).norm();
    }
    return norms;
}

}  // namespace rac
