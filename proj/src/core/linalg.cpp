#include "rmm/core/linalg.hpp"

#include "rmm/core/errors.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>

namespace rmm {

MatFn constant(const Mat& m) {
    return [m](double) { return m; };
}

Mat symmetrize(const Mat& m) {
    return 0.5 * (m + m.transpose());
}

double symmetry_defect(const Mat& m) {
    if (m.size() == 0) return 0.0;
    return (m - m.transpose()).cwiseAbs().maxCoeff();
}

double inf_norm(const Mat& m) {
    if (m.size() == 0) return 0.0;
    return m.cwiseAbs().rowwise().sum().maxCoeff();
}

double max_abs(const Mat& m) {
    if (m.size() == 0) return 0.0;
    return m.cwiseAbs().maxCoeff();
}

double min_eigenvalue(const Mat& m) {
    if (m.size() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<Mat> es(symmetrize(m), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

bool is_psd(const Mat& m, double tol) {
    return min_eigenvalue(m) >= -tol * std::max(1.0, max_abs(m));
}

bool is_pd(const Mat& m, double tol) {
    return min_eigenvalue(m) > tol * std::max(1.0, max_abs(m));
}

Mat expm(const Mat& m) {
    return m.exp();
}

Mat checked_inverse(const Mat& m, const char* what) {
    if (m.rows() != m.cols()) throw DimensionError(std::string(what) + ": matrix is not square");
    Eigen::FullPivLU<Mat> lu(m);
    if (!lu.isInvertible()) throw SingularMatrix(std::string(what) + " is singular");
    return lu.inverse();
}

Mat psd_sqrt_factor(const Mat& s) {
    Eigen::SelfAdjointEigenSolver<Mat> es(symmetrize(s));
    Vec ev = es.eigenvalues();
    if (ev.size() > 0 && ev.minCoeff() < -1e-10 * std::max(1.0, ev.cwiseAbs().maxCoeff()))
        throw NotPSD("matrix square root of a non-PSD matrix");
    return es.eigenvectors() * ev.cwiseMax(0.0).cwiseSqrt().asDiagonal();
}

std::vector<double> uniform_grid(double t0, double T, std::size_t steps) {
    if (steps == 0 || !(T > t0)) throw ConfigError("uniform_grid: need T > t0 and steps > 0");
    std::vector<double> g(steps + 1);
    const double h = (T - t0) / static_cast<double>(steps);
    for (std::size_t i = 0; i <= steps; ++i) g[i] = t0 + h * static_cast<double>(i);
    g.back() = T;
    return g;
}

std::vector<double> grid_with_step(double t0, double T, double dt) {
    if (!(dt > 0)) throw ConfigError("time step must be positive");
    const auto steps = static_cast<std::size_t>(std::max(1.0, std::round((T - t0) / dt)));
    return uniform_grid(t0, T, steps);
}

namespace {

// Index i with grid[i] <= t < grid[i+1] and the weight on grid[i+1].
std::pair<std::size_t, double> locate(std::span<const double> grid, double t) {
    if (t <= grid.front()) return {0, 0.0};
    if (t >= grid.back()) return {grid.size() - 2, 1.0};
    auto it = std::upper_bound(grid.begin(), grid.end(), t);
    std::size_t i = static_cast<std::size_t>(it - grid.begin()) - 1;
    double w = (t - grid[i]) / (grid[i + 1] - grid[i]);
    return {i, w};
}

}  // namespace

Mat interpolate(std::span<const double> grid, const std::vector<Mat>& path, double t) {
    if (grid.size() == 1) return path.front();
    auto [i, w] = locate(grid, t);
    if (w == 0.0) return path[i];
    if (w == 1.0) return path[i + 1];
    return (1.0 - w) * path[i] + w * path[i + 1];
}

Vec interpolate(std::span<const double> grid, const std::vector<Vec>& path, double t) {
    if (grid.size() == 1) return path.front();
    auto [i, w] = locate(grid, t);
    if (w == 0.0) return path[i];
    if (w == 1.0) return path[i + 1];
    return (1.0 - w) * path[i] + w * path[i + 1];
}

double interpolate(std::span<const double> grid, const std::vector<double>& path, double t) {
    if (grid.size() == 1) return path.front();
    auto [i, w] = locate(grid, t);
    return (1.0 - w) * path[i] + w * path[i + 1];
}

}  // namespace rmm
