#include "rac/linalg.hpp"

#include "rac/errors.hpp"

namespace rac {

Vec vec(const Mat& m) {
    // Eigen stores column-major, so the flat view is already the vec we want.
    return Eigen::Map<const Vec>(m.data(), m.size());
}

Mat unvec(const Eigen::Ref<const Vec>& v, Eigen::Index rows, Eigen::Index cols) {
    if (v.size() != rows * cols) {
        throw DimensionError("unvec: vector length " + std::to_string(v.size()) +
                             " does not match shape " + std::to_string(rows) + "x" +
                             std::to_string(cols));
    }
    Mat m(rows, cols);
    Eigen::Map<Vec>(m.data(), m.size()) = v;
    return m;
}

Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

void multiply_identity_kron_vt(const Mat& m, const Vec& v, Eigen::Ref<Mat> out) {
    const Eigen::Index r = v.size();
    if (out.rows() != m.rows() || out.cols() != m.cols() * r) {
        throw DimensionError("multiply_identity_kron_vt: output shape mismatch");
    }
    for (Eigen::Index i = 0; i < m.cols(); ++i) {
        out.middleCols(i * r, r).noalias() = m.col(i) * v.transpose();
    }
}

}  // namespace rac
