#include "rmm/riccati/assumptions.hpp"

#include "rmm/core/errors.hpp"

#include <algorithm>
#include <limits>

namespace rmm {

ControlBlocks control_blocks(const BlockSpec& spec, double t) {
    ControlBlocks b;
    Mat u22 = spec.U22(t);
    Mat y21 = spec.Y21(t);
    b.A = checked_inverse(u22, "U22");
    b.B = 2.0 * b.A * y21;
    b.C = symmetrize(spec.Q11(t) + y21.transpose() * b.A * y21);
    b.R = -spec.Y11(t);
    b.Sigma = 0.5 * spec.U11(t);
    return b;
}

AssumptionReport check_assumptions(const BlockSpec& spec, std::span<const double> grid,
                                   double tol) {
    if (grid.empty()) throw ConfigError("assumption check needs a non-empty grid");
    spec.validate(grid);
    AssumptionReport rep;
    rep.c_min_eigenvalue = std::numeric_limits<double>::infinity();
    rep.bsb_min_eigenvalue = std::numeric_limits<double>::infinity();
    rep.c_psd = true;
    rep.bsb_pd = true;
    bool c_zero = true;
    std::vector<Mat> y11(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double t = grid[i];
        ControlBlocks b = control_blocks(spec, t);
        const double scale_c = std::max(1.0, max_abs(b.C));
        const double ce = min_eigenvalue(b.C);
        rep.c_min_eigenvalue = std::min(rep.c_min_eigenvalue, ce);
        if (ce < -tol * scale_c && rep.c_psd) {
            rep.c_psd = false;
            rep.c_failure_time = t;
        }
        if (max_abs(b.C) > tol) c_zero = false;
        Mat bsb = b.B * b.Sigma * b.B.transpose();
        const double be = min_eigenvalue(bsb);
        rep.bsb_min_eigenvalue = std::min(rep.bsb_min_eigenvalue, be);
        if (be <= tol * std::max(1.0, max_abs(bsb)) && rep.bsb_pd) {
            rep.bsb_pd = false;
            rep.bsb_failure_time = t;
        }
        y11[i] = spec.Y11(t);
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        for (std::size_t j = i + 1; j < grid.size(); ++j) {
            const double c = max_abs(y11[i] * y11[j] - y11[j] * y11[i]);
            if (c > rep.max_commutator) {
                rep.max_commutator = c;
                rep.commutator_witness = std::make_pair(grid[i], grid[j]);
            }
        }
    }
    rep.y11_commute = rep.max_commutator <= tol;
    if (rep.y11_commute) rep.commutator_witness.reset();
    rep.assumption2 = c_zero && max_abs(spec.Psi) <= tol;
    return rep;
}

}  // namespace rmm
