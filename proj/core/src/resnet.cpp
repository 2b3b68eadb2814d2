#include "rac/resnet.hpp"

#include <cmath>

#include "rac/errors.hpp"

namespace rac {

Activation activation_from_string(const std::string& name) {
    if (name == "tanh") return Activation::Tanh;
    if (name == "identity") return Activation::Identity;
    throw ConfigError("unknown activation '" + name + "' (expected tanh or identity)");
}

std::string to_string(Activation a) {
    switch (a) {
        case Activation::Tanh: return "tanh";
        case Activation::Identity: return "identity";
    }
    return "?";
}

namespace {

void apply_activation(Activation a, const Vec& z, Vec& value, Vec& deriv) {
    switch (a) {
        case Activation::Tanh:
            value = z.array().tanh();
            deriv = 1.0 - value.array().square();
            return;
        case Activation::Identity:
            value = z;
            deriv = Vec::Ones(z.size());
            return;
    }
}

}  // namespace

std::int64_t ResNetSpec::total_weight_count() const {
    std::int64_t total = 0;
    for (const BlockSpec& b : blocks) {
        for (std::size_t j = 0; j + 1 < b.widths.size(); ++j) {
            total += static_cast<std::int64_t>(b.widths[j]) * b.widths[j + 1];
        }
    }
    return total;
}

void ResNetSpec::validate() const {
    if (io_dim <= 0) throw DimensionError("spec: io_dim must be positive");
    if (blocks.empty()) throw DimensionError("spec: at least one block required");
    for (std::size_t p = 0; p < blocks.size(); ++p) {
        const BlockSpec& b = blocks[p];
        if (b.widths.size() < 2) {
            throw DimensionError("spec: block " + std::to_string(p) +
                                 " needs at least an input and output width");
        }
        if (b.hidden_layers() < 1) {
            throw DimensionError("spec: block " + std::to_string(p) +
                                 " needs at least one hidden layer");
        }
        for (int w : b.widths) {
            if (w <= 0) {
                throw DimensionError("spec: nonpositive width in block " + std::to_string(p));
            }
        }
        // The block recursion only composes if every block maps R^n to R^n.
        if (b.widths.front() != io_dim || b.widths.back() != io_dim) {
            throw DimensionError("spec: block " + std::to_string(p) +
                                 " must start and end at io_dim=" + std::to_string(io_dim));
        }
        if (static_cast<int>(b.activations.size()) != b.hidden_layers()) {
            throw DimensionError("spec: block " + std::to_string(p) +
                                 " has " + std::to_string(b.activations.size()) +
                                 " activations for " + std::to_string(b.hidden_layers()) +
                                 " hidden layers");
        }
    }
}

ResNetSpec ResNetSpec::uniform(int io_dim, int num_blocks, int hidden_per_block,
                               int width, Activation act, bool shortcut) {
    BlockSpec b;
    b.widths.assign(static_cast<std::size_t>(hidden_per_block) + 2, width);
    b.widths.front() = io_dim;
    b.widths.back() = io_dim;
    b.activations.assign(static_cast<std::size_t>(hidden_per_block), act);

    ResNetSpec spec;
    spec.io_dim = io_dim;
    spec.shortcut_enabled = shortcut;
    spec.blocks.assign(static_cast<std::size_t>(num_blocks), b);
    spec.validate();
    return spec;
}

WeightLayout::WeightLayout(const ResNetSpec& spec) {
    spec.validate();
    for (int p = 0; p < spec.num_blocks(); ++p) {
        const BlockSpec& b = spec.blocks[static_cast<std::size_t>(p)];
        block_start_.push_back(static_cast<int>(slices_.size()));
        for (int j = 0; j + 1 < static_cast<int>(b.widths.size()); ++j) {
            WeightSlice s;
            s.block = p;
            s.layer = j;
            s.offset = total_;
            s.rows = b.widths[static_cast<std::size_t>(j)];
            s.cols = b.widths[static_cast<std::size_t>(j) + 1];
            total_ += s.size();
            slices_.push_back(s);
        }
    }
}

const WeightSlice& WeightLayout::slice(int block, int layer) const {
    if (block < 0 || block >= num_blocks()) {
        throw DimensionError("layout: block index " + std::to_string(block) + " out of range");
    }
    const int start = block_start_[static_cast<std::size_t>(block)];
    const int end = (block + 1 < num_blocks()) ? block_start_[static_cast<std::size_t>(block) + 1]
                                               : static_cast<int>(slices_.size());
    if (layer < 0 || start + layer >= end) {
        throw DimensionError("layout: layer index " + std::to_string(layer) +
                             " out of range for block " + std::to_string(block));
    }
    return slices_[static_cast<std::size_t>(start + layer)];
}

std::int64_t WeightLayout::block_offset(int block) const {
    return slice(block, 0).offset;
}

std::int64_t WeightLayout::block_size(int block) const {
    const int start = block_start_[static_cast<std::size_t>(block)];
    const int end = (block + 1 < num_blocks()) ? block_start_[static_cast<std::size_t>(block) + 1]
                                               : static_cast<int>(slices_.size());
    std::int64_t size = 0;
    for (int i = start; i < end; ++i) size += slices_[static_cast<std::size_t>(i)].size();
    return size;
}

WeightVector::WeightVector(std::shared_ptr<const WeightLayout> layout)
    : layout_(std::move(layout)), data_(Vec::Zero(layout_->total())) {}

WeightVector::WeightVector(std::shared_ptr<const WeightLayout> layout, Vec data)
    : layout_(std::move(layout)), data_(std::move(data)) {
    if (data_.size() != layout_->total()) {
        throw DimensionError("weights: flat length " + std::to_string(data_.size()) +
                             " does not match layout total " + std::to_string(layout_->total()));
    }
}

Eigen::Map<const Mat> WeightVector::matrix(int block, int layer) const {
    const WeightSlice& s = layout_->slice(block, layer);
    return Eigen::Map<const Mat>(data_.data() + s.offset, s.rows, s.cols);
}

Eigen::Map<Mat> WeightVector::matrix(int block, int layer) {
    const WeightSlice& s = layout_->slice(block, layer);
    return Eigen::Map<Mat>(data_.data() + s.offset, s.rows, s.cols);
}

WeightVector init_weights(std::shared_ptr<const WeightLayout> layout, Rng& rng,
                          double low, double high) {
    if (!(low < high)) throw DimensionError("init_weights: requires low < high");
    WeightVector w(std::move(layout));
    for (Eigen::Index i = 0; i < w.flat().size(); ++i) {
        w.flat()[i] = rng.uniform(low, high);
    }
    return w;
}

Vec block_forward(const ResNetSpec& spec, const WeightVector& weights, int block,
                  const Vec& input, BlockCache* cache) {
    const BlockSpec& b = spec.blocks.at(static_cast<std::size_t>(block));
    if (input.size() != b.widths.front()) {
        throw DimensionError("block_forward: input length " + std::to_string(input.size()) +
                             " does not match block width " + std::to_string(b.widths.front()));
    }
    const int k = b.hidden_layers();
    if (cache) {
        cache->input = input;
        cache->act.resize(static_cast<std::size_t>(k));
        cache->act_deriv.resize(static_cast<std::size_t>(k));
    }
    Vec cur = input;
    Vec value, deriv;
    for (int j = 1; j <= k; ++j) {
        const Vec z = weights.matrix(block, j - 1).transpose() * cur;
        apply_activation(b.activations[static_cast<std::size_t>(j - 1)], z, value, deriv);
        if (cache) {
            cache->act[static_cast<std::size_t>(j - 1)] = value;
            cache->act_deriv[static_cast<std::size_t>(j - 1)] = deriv;
        }
        cur = value;
    }
    Vec out = weights.matrix(block, k).transpose() * cur;
    if (cache) cache->output = out;
    return out;
}

Vec resnet_forward(const ResNetSpec& spec, const WeightVector& weights, const Vec& x,
                   ForwardCache* cache) {
    if (x.size() != spec.io_dim) {
        throw DimensionError("resnet_forward: input length " + std::to_string(x.size()) +
                             " does not match io_dim " + std::to_string(spec.io_dim));
    }
    if (!x.allFinite()) throw NumericError("resnet_forward: non-finite input");

    const int m = spec.num_blocks();
    if (cache) cache->blocks.resize(static_cast<std::size_t>(m));

    Vec eta = x;
    for (int p = 0; p < m; ++p) {
        BlockCache* bc = cache ? &cache->blocks[static_cast<std::size_t>(p)] : nullptr;
        const Vec out = block_forward(spec, weights, p, eta, bc);
        eta = spec.shortcut_enabled ? Vec(eta + out) : out;
        if (!eta.allFinite()) {
            throw NumericError("resnet_forward: non-finite output at block " + std::to_string(p));
        }
    }
    if (cache) cache->output = eta;
    return eta;
}

}  // namespace rac
