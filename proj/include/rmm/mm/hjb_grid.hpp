#pragma once

#include "rmm/mm/model.hpp"
#include "rmm/simd/kernels.hpp"

#include <vector>

namespace rmm::mm {

struct HJBGridSpec {
    double dt = 1e-3;
    double dq = 25.0;
    double dS = 0.05;
    /// Total S extent in units of sigma sqrt(T), centred on Sbar.
    double S_span_sd = 6.0;
    /// Hamiltonian lookup tables on [p_lo, p_hi]; points outside are evaluated directly.
    double p_lo = -2.0;
    double p_hi = 2.0;
    double p_step = 2e-3;
    double divergence_cap = 1e12;
};

/// theta on the (q, S) lattice at t = 0 with the quotes it implies.
struct HJBGridSolution {
    std::vector<double> q;
    std::vector<double> S;
    /// theta[iq * S.size() + iS]
    std::vector<double> theta;
    double dt = 0.0;
    int steps = 0;
    double cap = 0.0;
    std::size_t fallback_evaluations = 0;
    MMConfig config;

    double at(std::size_t iq, std::size_t iS) const { return theta[iq * S.size() + iS]; }
    std::size_t q_index(double q) const;
    /// theta(0, q, .) linearly interpolated in S.
    double theta_at(double q, double S) const;
    /// Optimal shift from the grid; +inf when the trade would breach the cap.
    double quote(double q, double S, double z, Side side, int tier = 0) const;
};

/// Backward semi-implicit scheme for one asset and no signals: the S advection and
/// diffusion are implicit (tridiagonal), the Hamiltonian, risk and hedging terms explicit.
HJBGridSolution hjb_grid_solve_1d(const MMConfig& config, const HJBGridSpec& spec = {});

/// Table of H(z, .) and its derivative for the lattice solver.
simd::HermiteTable hamiltonian_table(const IntensityModel& m, double rho, double z, double lo,
                                     double hi, double step);

}  // namespace rmm::mm
