#pragma once

#include <Eigen/Dense>

namespace pfluid {

/// Small vectors and matrices for dim in {2, 3}. Fixed maximum size, so no
/// heap traffic inside element loops.
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 3, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 3, 3>;
using Mat9 = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 9, 9>;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Symmetric part ½(A + Aᵀ).
inline Mat sym_part(const Mat& a) { return 0.5 * (a + a.transpose()); }

/// Frobenius product A·B = Σ A_ij B_ij.
inline double dot(const Mat& a, const Mat& b) { return a.cwiseProduct(b).sum(); }

}  // namespace pfluid
