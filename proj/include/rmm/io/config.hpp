#pragma once

#include "rmm/exec/engine.hpp"
#include "rmm/leqg/problem.hpp"
#include "rmm/mm/hjb_grid.hpp"
#include "rmm/mm/model.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace rmm::io {

inline constexpr int kSchemaVersion = 1;

struct RiskSection {
    double rho = 0.0;
    Mat Gamma;
    std::optional<Mat> eta;
    double T = 0.0;
    double cap = 600.0;
};

struct SolverSection {
    Scheme scheme = Scheme::ExplicitRK4;
    double dt = 1e-3;
    double norm_cap = 1e12;
    SolverOptions options() const;
};

struct SimulationSection {
    double dt = 1e-3;
    std::size_t n_paths = 100;
    std::uint64_t seed = 1;
    std::size_t recorded_paths = 1;
    std::size_t record_stride = 10;
};

struct SweepSection {
    std::vector<double> t{0.0};
    std::vector<double> q;
    std::vector<double> S;
    std::vector<double> z;
    int asset = 0;
    int tier = 0;
};

struct ExecutionSection {
    Vec S0;
    Mat V;
    Vec b0;
    Mat Pi0;
    Vec true_mu;
    Vec q0;
    double X0 = 0.0;
};

enum class ProblemKind { MarketMaking, Execution, Leqg };

/// One scenario document, validated.
struct Scenario {
    ProblemKind problem = ProblemKind::MarketMaking;
    std::optional<mm::MMConfig> mm;
    std::optional<ExecutionSection> execution;
    std::optional<leqg::Problem> leqg;
    std::optional<RiskSection> risk;
    SolverSection solver;
    mm::HJBGridSpec grid;
    SimulationSection simulation;
    SweepSection sweep;
    std::string output_dir = ".";
    /// FNV-1a of the canonical document, hex.
    std::string hash;

    const mm::MMConfig& market_making() const;
    exec::DriftPosterior posterior() const;
    exec::ExecConfig exec_config() const;
    const leqg::Problem& leqg_problem() const;
};

Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::string& path);

std::string fnv1a_hex(const std::string& bytes);

}  // namespace rmm::io
