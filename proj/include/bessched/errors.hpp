#pragma once

#include <stdexcept>
#include <string>

namespace bessched {

// Input/contract violations. The CLI maps these to exit code 2.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Failures inside a solver or while persisting results. Exit code 3.
struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MissingColumn : ValidationError {
    explicit MissingColumn(const std::string& col)
        : ValidationError("missing required column: " + col), column(col) {}
    std::string column;
};

struct NonNumericCell : ValidationError {
    NonNumericCell(int row_, const std::string& col)
        : ValidationError("non-numeric cell at row " + std::to_string(row_) + ", column " + col),
          row(row_), column(col) {}
    int row;
    std::string column;
};

struct NegativeValue : ValidationError {
    NegativeValue(int row_, const std::string& col)
        : ValidationError("negative value at row " + std::to_string(row_) + ", column " + col),
          row(row_), column(col) {}
    int row;
    std::string column;
};

struct HorizonMismatch : ValidationError {
    HorizonMismatch(int n_steps, double dt_hours)
        : ValidationError("n_steps * dt_hours must equal 24 h, got " + std::to_string(n_steps) +
                          " * " + std::to_string(dt_hours)) {}
};

struct NonPositiveFactor : ValidationError {
    NonPositiveFactor() : ValidationError("scale factors must be > 0") {}
};

struct InvalidSpec : ValidationError {
    explicit InvalidSpec(const std::string& what) : ValidationError("invalid distribution spec: " + what) {}
};

struct NegativeFraction : ValidationError {
    NegativeFraction() : ValidationError("envelope fraction must be >= 0") {}
};

struct EmptySamples : ValidationError {
    EmptySamples() : ValidationError("entropy requires a non-empty sample set") {}
};

struct LengthMismatch : ValidationError {
    explicit LengthMismatch(const std::string& what) : ValidationError("length mismatch: " + what) {}
};

struct BoundOrder : ValidationError {
    BoundOrder() : ValidationError("box projection requires lo <= hi elementwise") {}
};

struct ShapeMismatch : ValidationError {
    explicit ShapeMismatch(const std::string& what) : ValidationError("shape mismatch: " + what) {}
};

struct BufferTooSmall : ValidationError {
    BufferTooSmall() : ValidationError("replay buffer holds fewer transitions than required") {}
};

struct EpisodeFinished : ValidationError {
    EpisodeFinished() : ValidationError("step() called on a finished episode") {}
};

struct Timeout : SolverError {
    explicit Timeout(double budget_s)
        : SolverError("wall-clock budget of " + std::to_string(budget_s) + " s exceeded") {}
};

struct NoFeasiblePoint : SolverError {
    NoFeasiblePoint() : SolverError("enumeration found no feasible schedule") {}
};

struct IoError : SolverError {
    explicit IoError(const std::string& what) : SolverError("io error: " + what) {}
};

}  // namespace bessched
