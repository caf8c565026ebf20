#include "rmm/leqg/simulate.hpp"

#include "rmm/core/errors.hpp"
#include "rmm/core/parallel.hpp"
#include "rmm/core/random.hpp"
#include "rmm/simd/kernels.hpp"

#include <cmath>

namespace rmm::leqg {

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

std::vector<double> flat(const Mat& m) {
    RowMat rm = m;
    return {rm.data(), rm.data() + rm.size()};
}

// Standard normal for (path, step, component); shared by both simulators.
struct NoiseSource {
    Philox gen;
    std::uint64_t pairs;

    double operator()(std::uint64_t path, std::uint64_t step, int comp) const {
        auto z = gen.normal_pair(path, step * pairs + static_cast<std::uint64_t>(comp / 2));
        return z[static_cast<std::size_t>(comp % 2)];
    }

    void fill(std::uint64_t path, std::uint64_t step, int j, double* out) const {
        for (int m = 0; m < j; m += 2) {
            auto z = gen.normal_pair(path, step * pairs + static_cast<std::uint64_t>(m / 2));
            out[m] = z[0];
            if (m + 1 < j) out[m + 1] = z[1];
        }
    }
};

struct StepData {
    std::vector<double> A, B, C, R, V;
};

void check_options(const SimulationOptions& o) {
    if (!(o.dt > 0)) throw ConfigError("simulation dt must be positive");
    if (o.n_paths == 0) throw ConfigError("need at least one path");
    if (o.block == 0) throw ConfigError("block size must be positive");
}

double terminal_utility(const Problem& p, const Vec& x, const Vec& y, double z) {
    const double penalty = x.dot(p.Psi * x) + y.dot(p.Upsilon.transpose() * x) + y.dot(p.Gamma * y);
    return -std::exp(-p.rho * (z - penalty));
}

}  // namespace

LinearPolicy optimal_policy(const Problem& p, const ValueCoefficients& v,
                            std::span<const double> grid) {
    LinearPolicy pol;
    pol.steps.reserve(grid.size());
    for (double t : grid) pol.steps.push_back(optimal_gains(p, v, t));
    return pol;
}

LinearPolicy perturb(const LinearPolicy& base, double gain_scale, const Vec& offset) {
    LinearPolicy out = base;
    for (Gains& g : out.steps) {
        g.Kx *= gain_scale;
        g.Ky *= gain_scale;
        if (offset.size() != g.c.size()) throw DimensionError("offset has the wrong size");
        g.c += offset;
    }
    return out;
}

std::vector<Ensemble> simulate_linear(const Problem& p, std::span<const LinearPolicy> policies,
                                      const SimulationOptions& opts) {
    check_options(opts);
    const std::vector<double> grid = grid_with_step(0.0, p.T, opts.dt);
    p.validate(grid);
    const std::size_t steps = grid.size() - 1;
    const int d = p.d, r = p.r, j = p.noise_dim();
    if (d > simd::kMaxDim || r > simd::kMaxDim || j > simd::kMaxDim)
        throw DimensionError("batched simulation supports dimensions up to 8");
    for (const LinearPolicy& pol : policies)
        if (pol.steps.size() < steps) throw DimensionError("policy shorter than the simulation grid");

    std::vector<StepData> coeffs(steps);
    for (std::size_t k = 0; k < steps; ++k) {
        const double t = grid[k];
        coeffs[k] = {flat(p.A(t)), flat(p.B(t)), flat(p.C(t)), flat(p.R(t)), flat(p.V(t))};
    }
    struct PolicyData {
        std::vector<double> Kx, Ky, c;
    };
    std::vector<std::vector<PolicyData>> pdata(policies.size(), std::vector<PolicyData>(steps));
    for (std::size_t q = 0; q < policies.size(); ++q)
        for (std::size_t k = 0; k < steps; ++k) {
            const Gains& g = policies[q].steps[k];
            pdata[q][k] = {flat(g.Kx), flat(g.Ky), std::vector<double>(g.c.data(), g.c.data() + g.c.size())};
        }

    const std::size_t n = opts.n_paths;
    std::vector<Ensemble> out(policies.size());
    for (Ensemble& e : out) {
        e.d = d;
        e.r = r;
        e.grid = grid;
        e.xT.resize(n);
        e.yT.resize(n);
        e.zT.resize(n);
        e.paths.resize(std::min(opts.recorded_paths, n));
    }
    const NoiseSource noise{Philox(opts.seed), static_cast<std::uint64_t>((j + 1) / 2)};
    const std::size_t blocks = (n + opts.block - 1) / opts.block;

    parallel_for(blocks, [&](std::size_t b) {
        const std::size_t first = b * opts.block;
        const std::size_t nb = std::min(opts.block, n - first);
        const std::size_t P = policies.size();
        std::vector<double> x(P * d * nb), y(P * r * nb), z(P * nb), dW(j * nb);
        for (std::size_t q = 0; q < P; ++q)
            for (std::size_t i = 0; i < nb; ++i) {
                for (int c = 0; c < d; ++c) x[q * d * nb + c * nb + i] = p.x0[c];
                for (int c = 0; c < r; ++c) y[q * r * nb + c * nb + i] = p.y0[c];
                z[q * nb + i] = p.z0;
            }
        const std::size_t recorded = out.front().paths.size() > first
                                             ? std::min(nb, out.front().paths.size() - first)
                                             : 0;
        // State of the first recorded paths, with the control of gain set k.
        auto record = [&](std::size_t k) {
            for (std::size_t q = 0; q < P; ++q)
                for (std::size_t i = 0; i < recorded; ++i) {
                    Vec xv(d), yv(r);
                    for (int c = 0; c < d; ++c) xv[c] = x[q * d * nb + c * nb + i];
                    for (int c = 0; c < r; ++c) yv[c] = y[q * r * nb + c * nb + i];
                    const Gains& g = policies[q].steps[k];
                    PathRecord& rec = out[q].paths[first + i];
                    rec.u.push_back(g.Kx * xv + g.Ky * yv + g.c);
                    rec.x.push_back(std::move(xv));
                    rec.y.push_back(std::move(yv));
                    rec.z.push_back(z[q * nb + i]);
                }
        };
        double tmp[simd::kMaxDim];
        for (std::size_t k = 0; k < steps; ++k) {
            if (recorded) record(k);
            const double h = grid[k + 1] - grid[k];
            const double sq = std::sqrt(h);
            for (std::size_t i = 0; i < nb; ++i) {
                noise.fill(first + i, k, j, tmp);
                for (int m = 0; m < j; ++m) dW[m * nb + i] = sq * tmp[m];
            }
            for (std::size_t q = 0; q < P; ++q) {
                simd::LinearStep s;
                s.d = d;
                s.r = r;
                s.j = j;
                s.dt = h;
                s.Kx = pdata[q][k].Kx.data();
                s.Ky = pdata[q][k].Ky.data();
                s.c = pdata[q][k].c.data();
                s.A = coeffs[k].A.data();
                s.B = coeffs[k].B.data();
                s.C = coeffs[k].C.data();
                s.R = coeffs[k].R.data();
                s.V = coeffs[k].V.data();
                simd::linear_step(s, nb, x.data() + q * d * nb, y.data() + q * r * nb, z.data() + q * nb,
                                  dW.data());
            }
        }
        if (recorded) record(steps - 1);
        for (std::size_t q = 0; q < P; ++q)
            for (std::size_t i = 0; i < nb; ++i) {
                Vec xv(d), yv(r);
                for (int c = 0; c < d; ++c) xv[c] = x[q * d * nb + c * nb + i];
                for (int c = 0; c < r; ++c) yv[c] = y[q * r * nb + c * nb + i];
                out[q].xT[first + i] = std::move(xv);
                out[q].yT[first + i] = std::move(yv);
                out[q].zT[first + i] = z[q * nb + i];
            }
    });
    return out;
}

Ensemble simulate(const Problem& p, const FeedbackPolicy& policy, const SimulationOptions& opts) {
    check_options(opts);
    if (!policy) throw ConfigError("policy missing");
    const std::vector<double> grid = grid_with_step(0.0, p.T, opts.dt);
    p.validate(grid);
    const std::size_t steps = grid.size() - 1;
    const int d = p.d, r = p.r, j = p.noise_dim();
    const std::size_t n = opts.n_paths;

    Ensemble e;
    e.d = d;
    e.r = r;
    e.grid = grid;
    e.xT.resize(n);
    e.yT.resize(n);
    e.zT.resize(n);
    e.paths.resize(std::min(opts.recorded_paths, n));
    const NoiseSource noise{Philox(opts.seed), static_cast<std::uint64_t>((j + 1) / 2)};
    const std::size_t blocks = (n + opts.block - 1) / opts.block;
    std::vector<double> block_growth(blocks, 0.0);

    parallel_for(blocks, [&](std::size_t b) {
        const std::size_t first = b * opts.block;
        const std::size_t last = std::min(n, first + opts.block);
        Vec xi(j);
        for (std::size_t path = first; path < last; ++path) {
            Vec x = p.x0, y = p.y0;
            double z = p.z0;
            double sup_x = x.norm();
            PathRecord* rec = path < e.paths.size() ? &e.paths[path] : nullptr;
            for (std::size_t k = 0; k < steps; ++k) {
                const double t = grid[k];
                const double h = grid[k + 1] - t;
                Vec u = policy(t, x, y);
                if (u.size() != r) throw DimensionError("policy returned a control of the wrong size");
                block_growth[b] = std::max(block_growth[b], u.norm() / (1.0 + sup_x));
                if (rec) {
                    rec->x.push_back(x);
                    rec->y.push_back(y);
                    rec->u.push_back(u);
                    rec->z.push_back(z);
                }
                noise.fill(path, k, j, xi.data());
                z -= h * (u.dot(p.A(t) * u) + u.dot(p.B(t) * x) + x.dot(p.C(t) * x));
                x = x + h * (p.R(t) * x) + std::sqrt(h) * (p.V(t) * xi);
                y = y + h * u;
                sup_x = std::max(sup_x, x.norm());
            }
            if (rec) {
                rec->x.push_back(x);
                rec->y.push_back(y);
                rec->u.push_back(policy(grid.back(), x, y));
                rec->z.push_back(z);
            }
            e.xT[path] = x;
            e.yT[path] = y;
            e.zT[path] = z;
        }
    });
    for (double g : block_growth) e.growth_ratio = std::max(e.growth_ratio, g);
    return e;
}

MCEstimate mc_performance(const Ensemble& e, const Problem& p) {
    const std::size_t n = e.zT.size();
    if (n < 2) throw ConfigError("need at least two paths for an estimate");
    double mean = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double u = terminal_utility(p, e.xT[i], e.yT[i], e.zT[i]);
        const double delta = u - mean;
        mean += delta / static_cast<double>(i + 1);
        m2 += delta * (u - mean);
    }
    return {mean, std::sqrt(m2 / static_cast<double>(n - 1) / static_cast<double>(n)), n};
}

MCEstimate mc_difference(const Ensemble& a, const Ensemble& b, const Problem& p) {
    const std::size_t n = a.zT.size();
    if (n != b.zT.size() || n < 2) throw ConfigError("paired estimate needs equal ensembles");
    double mean = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double u = terminal_utility(p, a.xT[i], a.yT[i], a.zT[i]) -
                         terminal_utility(p, b.xT[i], b.yT[i], b.zT[i]);
        const double delta = u - mean;
        mean += delta / static_cast<double>(i + 1);
        m2 += delta * (u - mean);
    }
    return {mean, std::sqrt(m2 / static_cast<double>(n - 1) / static_cast<double>(n)), n};
}

double growth_bound(const LinearPolicy& policy, const Problem& p) {
    double kx = 0.0, ky = 0.0, kc = 0.0;
    for (const Gains& g : policy.steps) {
        kx = std::max(kx, g.Kx.norm());
        ky = std::max(ky, g.Ky.norm());
        kc = std::max(kc, g.c.norm());
    }
    // |y_s| <= (|y0| + T (kx X + kc)) e^{ky T}, hence |u_s| <= C (1 + X).
    const double grow = std::exp(ky * p.T);
    const double slope = kx + ky * p.T * kx * grow;
    const double intercept = kc + ky * (p.y0.norm() + p.T * kc) * grow;
    return std::max(slope, intercept);
}

}  // namespace rmm::leqg
