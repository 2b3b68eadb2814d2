#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "rac/linalg.hpp"
#include "rac/rng.hpp"

namespace rac {

enum class Activation { Tanh, Identity };

Activation activation_from_string(const std::string& name);
std::string to_string(Activation a);

/// One fully-connected block. widths holds the node counts L_0..L_{k+1}
/// (k hidden layers); the weight matrix feeding layer j+1 is L_j x L_{j+1}
/// and is applied transposed. activations has one entry per hidden layer.
struct BlockSpec {
    std::vector<int> widths;
    std::vector<Activation> activations;

    int hidden_layers() const { return static_cast<int>(widths.size()) - 2; }
};

/// Static architecture description. The forward map is the block recursion
///
///   eta_1 = x,   eta_{p+1} = eta_p + block_p(eta_p),   output = eta_{m+1}
///
/// where the identity term is the shortcut connection. With
/// shortcut_enabled = false the identity terms are dropped and the network
/// degrades to the plain fully-connected composition used as a baseline.
struct ResNetSpec {
    int io_dim = 0;
    bool shortcut_enabled = true;
    std::vector<BlockSpec> blocks;

    int num_blocks() const { return static_cast<int>(blocks.size()); }

    /// Sum over blocks and layers of L_j * L_{j+1}.
    std::int64_t total_weight_count() const;

    /// Throws DimensionError unless every block starts and ends at io_dim,
    /// all widths are positive, and activation counts match layer counts.
    void validate() const;

    /// All blocks identical: hidden widths `width`, one activation kind.
    static ResNetSpec uniform(int io_dim, int num_blocks, int hidden_per_block,
                              int width, Activation act, bool shortcut);
};

struct WeightSlice {
    int block = 0;
    int layer = 0;
    std::int64_t offset = 0;
    int rows = 0;  // L_{p,j}
    int cols = 0;  // L_{p,j+1}

    std::int64_t size() const { return static_cast<std::int64_t>(rows) * cols; }
};

/// Maps (block, layer) to a contiguous slice of the flat weight vector.
/// Slices are ordered block-major then layer-minor and partition the full
/// length; the Jacobian column layout mirrors this table exactly.
class WeightLayout {
public:
    explicit WeightLayout(const ResNetSpec& spec);

    std::int64_t total() const { return total_; }
    const WeightSlice& slice(int block, int layer) const;
    const std::vector<WeightSlice>& slices() const { return slices_; }
    std::int64_t block_offset(int block) const;
    std::int64_t block_size(int block) const;
    int num_blocks() const { return static_cast<int>(block_start_.size()); }

private:
    std::vector<WeightSlice> slices_;
    std::vector<int> block_start_;  // index into slices_ per block
    std::int64_t total_ = 0;
};

/// Flat parameter vector plus its layout. Matrices are exposed as maps over
/// the flat storage, so round-tripping a slice through vec/unvec is exact by
/// construction.
class WeightVector {
public:
    WeightVector() = default;
    explicit WeightVector(std::shared_ptr<const WeightLayout> layout);
    WeightVector(std::shared_ptr<const WeightLayout> layout, Vec data);

    const Vec& flat() const { return data_; }
    Vec& flat() { return data_; }

    Eigen::Map<const Mat> matrix(int block, int layer) const;
    Eigen::Map<Mat> matrix(int block, int layer);

    const WeightLayout& layout() const { return *layout_; }
    std::shared_ptr<const WeightLayout> layout_ptr() const { return layout_; }

private:
    std::shared_ptr<const WeightLayout> layout_;
    Vec data_;
};

/// Every entry i.i.d. uniform on [low, high); bit-deterministic given the
/// generator state.
WeightVector init_weights(std::shared_ptr<const WeightLayout> layout, Rng& rng,
                          double low, double high);

/// Per-block intermediates from one forward pass. act[j-1] and
/// act_deriv[j-1] hold the hidden layer j activation value and elementwise
/// derivative; input is the block input (the j = 0 "activation").
struct BlockCache {
    Vec input;
    std::vector<Vec> act;
    std::vector<Vec> act_deriv;
    Vec output;
};

struct ForwardCache {
    std::vector<BlockCache> blocks;
    Vec output;
};

/// Runs one block: out = V_k^T act(V_{k-1}^T act(... act(V_0^T input))).
Vec block_forward(const ResNetSpec& spec, const WeightVector& weights, int block,
                  const Vec& input, BlockCache* cache = nullptr);

/// Full network forward pass. Rejects non-finite input; a non-finite block
/// output raises NumericError naming the offending block.
Vec resnet_forward(const ResNetSpec& spec, const WeightVector& weights, const Vec& x,
                   ForwardCache* cache = nullptr);

}  // namespace rac
