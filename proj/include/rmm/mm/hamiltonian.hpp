#pragma once

#include "rmm/mm/intensity.hpp"

namespace rmm::mm {

struct HamiltonianValue {
    double H = 0.0;
    double dH = 0.0;          // dH/dp
    double delta_star = 0.0;  // maximiser
};

/// H(z, p) = sup_delta Lambda(delta) / (rho z) * (1 - exp(-rho z (delta - p))).
HamiltonianValue hamiltonian(const IntensityModel& m, double rho, double z, double p);

double hamiltonian_exp_closed_form(double A, double k, double rho, double z, double p);

/// Lambda^{-1}(rho z H - H').
double quote_shift(const IntensityModel& m, double rho, double z, double p);
double quote_shift(const IntensityModel& m, double rho, double z, const HamiltonianValue& h);

/// Maximiser of the objective by bracketing and golden section only.
double argmax_golden(const IntensityModel& m, double rho, double z, double p, double tol = 1e-12);

struct TaylorAlphas {
    double a0 = 0.0;
    double a1 = 0.0;
    double a2 = 0.0;
};

/// Second-order expansion of H(z, .) around p = 0.
TaylorAlphas taylor_alphas(const IntensityModel& m, double rho, double z);

}  // namespace rmm::mm
