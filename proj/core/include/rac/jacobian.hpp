#pragma once

#include "rac/resnet.hpp"

namespace rac {

/// Derivative of one block's output with respect to that block's weights,
/// evaluated at the cached point. Columns follow the block's slice layout:
/// layer 0 first, then layer 1, and so on. Shape is io_dim x block weight
/// count.
Mat block_weight_jacobian(const ResNetSpec& spec, const WeightVector& weights,
                          int block, const BlockCache& cache);

/// Derivative of one block's output with respect to its input, an
/// io_dim x io_dim matrix.
Mat block_input_jacobian(const ResNetSpec& spec, const WeightVector& weights,
                         int block, const BlockCache& cache);

/// Full weight Jacobian of the network output, io_dim rows by total weight
/// count columns, with column layout identical to the flat weight vector.
///
/// Block p's slice is  D_p * L_p  where L_p is the block weight Jacobian and
/// D_p is the product of downstream input factors: (I + Xi_l) over blocks
/// l > p with shortcuts enabled, or plain Xi_l without them. The last block
/// has no downstream factor, so its slice equals L_m in both modes. The
/// empty-product-is-identity convention makes that a special case of the
/// same loop.
Mat resnet_jacobian(const ResNetSpec& spec, const WeightVector& weights,
                    const ForwardCache& cache);

/// Central-difference oracle: one forward pass pair per weight coordinate.
/// Intended for small networks only; this is the ground truth the analytic
/// assembly is checked against.
Mat finite_diff_jacobian(const ResNetSpec& spec, const WeightVector& weights,
                         const Vec& x, double step);

/// Frobenius norm of each block's Jacobian slice, in block order. With
/// shortcuts disabled the early entries collapse toward zero (the vanishing
/// gradient effect); with shortcuts they stay comparable to the last block.
Vec gradient_norm_profile(const ResNetSpec& spec, const WeightVector& weights,
                          const Vec& x);

}  // namespace rac
