#pragma once

#include <stdexcept>
#include <string>

namespace rmm {

/// Invalid or inconsistent user input (dimensions, ranges, schema).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class SingularMatrix : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NotPSD : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Time-dependent coefficients whose values at two grid times fail to commute.
class NonCommuting : public std::runtime_error {
public:
    NonCommuting(double t1, double t2, double norm)
        : std::runtime_error("coefficients do not commute at t=" + std::to_string(t1) + ", s=" +
                             std::to_string(t2) + " (|[A,B]| = " + std::to_string(norm) + ")"),
          t1_(t1), t2_(t2), norm_(norm) {}
    double t1() const noexcept { return t1_; }
    double t2() const noexcept { return t2_; }
    double commutator_norm() const noexcept { return norm_; }

private:
    double t1_, t2_, norm_;
};

/// The Riccati solution left every bounded set while integrating backward.
class BlowUp : public std::runtime_error {
public:
    BlowUp(double t, double norm)
        : std::runtime_error("Riccati solution blew up at t=" + std::to_string(t) +
                             " (|P| = " + std::to_string(norm) + ")"),
          t_(t), norm_(norm) {}
    double time() const noexcept { return t_; }
    double norm() const noexcept { return norm_; }

private:
    double t_, norm_;
};

class NoConvergence : public std::runtime_error {
public:
    NoConvergence(const std::string& what, double t, int iterations)
        : std::runtime_error(what + " at t=" + std::to_string(t) + " after " +
                             std::to_string(iterations) + " iterations"),
          t_(t), iterations_(iterations) {}
    double time() const noexcept { return t_; }
    int iterations() const noexcept { return iterations_; }

private:
    double t_;
    int iterations_;
};

class NotBracketed : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class RangeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class GridDivergence : public std::runtime_error {
public:
    GridDivergence(const std::string& what, double t, double dt, double dS)
        : std::runtime_error(what + " at t=" + std::to_string(t) + " (dt=" + std::to_string(dt) +
                             ", dS=" + std::to_string(dS) + ")"),
          t_(t), dt_(dt), dS_(dS) {}
    double time() const noexcept { return t_; }
    double dt() const noexcept { return dt_; }
    double dS() const noexcept { return dS_; }

private:
    double t_, dt_, dS_;
};

}  // namespace rmm
