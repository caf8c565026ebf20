#pragma once

#include <Eigen/Dense>

#include <functional>
#include <span>
#include <vector>

namespace rmm {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

/// Matrix-valued coefficient of time.
using MatFn = std::function<Mat(double)>;

MatFn constant(const Mat& m);

Mat symmetrize(const Mat& m);

/// Largest absolute entry of P - P^T.
double symmetry_defect(const Mat& m);

/// Maximum absolute row sum.
double inf_norm(const Mat& m);

double max_abs(const Mat& m);

/// Smallest eigenvalue of the symmetric part.
double min_eigenvalue(const Mat& m);

bool is_psd(const Mat& m, double tol = 1e-12);
bool is_pd(const Mat& m, double tol = 1e-12);

/// Padé scaling-and-squaring matrix exponential.
Mat expm(const Mat& m);

/// Throws SingularMatrix if the matrix is (numerically) singular.
Mat checked_inverse(const Mat& m, const char* what);

/// Any V with V V^T = S for symmetric PSD S.
Mat psd_sqrt_factor(const Mat& s);

/// Uniform grid t0, t0+h, ..., T with n steps.
std::vector<double> uniform_grid(double t0, double T, std::size_t steps);

/// Uniform grid with step closest to dt that divides [t0, T] exactly.
std::vector<double> grid_with_step(double t0, double T, double dt);

/// Linear interpolation of a matrix path on a sorted grid (clamped at the ends).
Mat interpolate(std::span<const double> grid, const std::vector<Mat>& path, double t);
Vec interpolate(std::span<const double> grid, const std::vector<Vec>& path, double t);
double interpolate(std::span<const double> grid, const std::vector<double>& path, double t);

}  // namespace rmm
