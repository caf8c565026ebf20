#include "rmm/leqg/problem.hpp"

#include "rmm/core/errors.hpp"
#include "rmm/riccati/assumptions.hpp"

#include <array>

namespace rmm::leqg {

Mat Problem::Sigma(double t) const {
    Mat v = V(t);
    return v * v.transpose();
}

int Problem::noise_dim() const {
    return static_cast<int>(V(0.0).cols());
}

void Problem::validate(std::span<const double> times) const {
    if (d <= 0 || r <= 0) throw DimensionError("LEQG dimensions must be positive");
    if (!A || !B || !C || !R || !V) throw ConfigError("LEQG coefficient missing");
    if (!(rho > 0)) throw ConfigError("rho must be positive");
    if (!(T > 0)) throw ConfigError("horizon must be positive");
    auto shape = [](const Mat& m, Eigen::Index rows, Eigen::Index cols, const char* name) {
        if (m.rows() != rows || m.cols() != cols)
            throw DimensionError(std::string(name) + " has the wrong shape");
    };
    shape(Psi, d, d, "Psi");
    shape(Upsilon, d, r, "Upsilon");
    shape(Gamma, r, r, "Gamma");
    if (x0.size() != d || y0.size() != r) throw DimensionError("initial state has the wrong size");
    for (double t : times) {
        Mat a = A(t);
        shape(a, r, r, "A");
        shape(B(t), r, d, "B");
        shape(C(t), d, d, "C");
        shape(R(t), d, d, "R");
        if (V(t).rows() != d) throw DimensionError("V has the wrong number of rows");
        if (!is_pd(a)) throw NotPSD("A must be positive definite");
    }
}

BlockSpec to_block_spec(const Problem& p) {
    p.validate(std::array<double, 1>{0.0});
    BlockSpec s;
    s.d = p.d;
    s.r = p.r;
    s.rho = p.rho;
    auto A = p.A, B = p.B, C = p.C, R = p.R, V = p.V;
    s.U22 = [A](double t) { return symmetrize(checked_inverse(A(t), "A")); };
    s.Y21 = [A, B](double t) { return Mat(0.5 * checked_inverse(A(t), "A") * B(t)); };
    s.Q11 = [A, B, C](double t) {
        Mat b = B(t);
        return symmetrize(C(t) - 0.25 * b.transpose() * checked_inverse(A(t), "A") * b);
    };
    s.Y11 = [R](double t) { return Mat(-R(t)); };
    s.U11 = [V](double t) {
        Mat v = V(t);
        return Mat(2.0 * v * v.transpose());
    };
    s.Psi = p.Psi;
    s.Upsilon = p.Upsilon;
    s.Gamma = p.Gamma;
    return s;
}

Problem from_block_spec(const BlockSpec& spec, double T) {
    spec.validate(std::array<double, 1>{0.0});
    Problem p;
    p.d = spec.d;
    p.r = spec.r;
    p.rho = spec.rho;
    p.T = T;
    p.A = [spec](double t) { return control_blocks(spec, t).A; };
    p.B = [spec](double t) { return control_blocks(spec, t).B; };
    p.C = [spec](double t) { return control_blocks(spec, t).C; };
    p.R = [spec](double t) { return control_blocks(spec, t).R; };
    p.V = [spec](double t) { return psd_sqrt_factor(0.5 * spec.U11(t)); };
    p.Psi = spec.Psi;
    p.Upsilon = spec.Upsilon;
    p.Gamma = spec.Gamma;
    p.x0 = Vec::Zero(spec.d);
    p.y0 = Vec::Zero(spec.r);
    return p;
}

}  // namespace rmm::leqg
