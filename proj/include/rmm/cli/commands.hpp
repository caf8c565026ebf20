#pragma once

#include "rmm/io/config.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace rmm::cli {

enum ExitCode : int {
    kOk = 0,
    kFailure = 1,
    kConfigError = 2,
    kBlowUp = 3,
    kGridDivergence = 4,
};

struct Options {
    std::string config;
    std::optional<std::string> out;
    std::optional<std::uint64_t> seed;
};

/// Runs f and maps library exceptions onto exit codes, reporting them on err.
int guarded(const std::function<void()>& f, std::ostream& err);

void cmd_solve_dre(const Options& o, std::ostream& log);
void cmd_quotes(const Options& o, std::ostream& log);
void cmd_compare_approx(const Options& o, std::ostream& log);
void cmd_simulate(const Options& o, const std::string& which, std::ostream& log);

/// One row of the lattice-versus-approximation comparison.
struct ComparisonRow {
    double q = 0.0;
    double S = 0.0;
    double z = 0.0;
    mm::Side side = mm::Side::Bid;
    double delta_grid = 0.0;
    double delta_approx = 0.0;
    bool high_deviation = false;
};

struct Comparison {
    std::vector<ComparisonRow> rows;
    double max_abs_deviation = 0.0;
    bool grid_monotone = true;
    bool approx_monotone = true;
};

using QuoteFn = std::function<double(double q, double S, double z, mm::Side side)>;

/// Evaluates both quote functions on the lattice. A row is flagged when its deviation
/// exceeds 10% of the dynamic range of the lattice quotes of its (S, z, side) series.
Comparison compare_quotes(const std::vector<double>& q, const std::vector<double>& S,
                          const std::vector<double>& z, const QuoteFn& grid, const QuoteFn& approx);

}  // namespace rmm::cli
