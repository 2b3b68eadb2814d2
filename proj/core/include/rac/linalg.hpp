#pragma once

#include <Eigen/Dense>

namespace rac {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Column-major flattening: vec([[1,2],[3,4]]) = [1,3,2,4]. This convention
/// is fixed repository-wide so that vec(A*B*C) = kron(C^T, A) * vec(B) holds
/// exactly, which the weight-Jacobian assembly relies on.
Vec vec(const Mat& m);

/// Inverse of vec for the given shape.
Mat unvec(const Eigen::Ref<const Vec>& v, Eigen::Index rows, Eigen::Index cols);

/// Dense Kronecker product. Intended for small verification work, not the
/// simulation hot path.
Mat kron(const Mat& a, const Mat& b);

/// Computes m * (I_c kron v^T) without forming the Kronecker factor; column
/// block i of the result is the outer product m.col(i) * v^T. `out` must be
/// m.rows() x (m.cols() * v.size()).
void multiply_identity_kron_vt(const Mat& m, const Vec& v, Eigen::Ref<Mat> out);

}  // namespace rac
