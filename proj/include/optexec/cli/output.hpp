#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "optexec/model_core.hpp"
#include "optexec/trajectory.hpp"

namespace optexec::cli {

inline constexpr std::size_t kTrajectoryPoints = 513;

/// Shortest decimal string that round-trips to `value`.
std::string format_number(double value);

/// Header "s,x,dxds" and one row per point of a uniform grid.
std::string trajectory_csv(const Trajectory& trajectory, std::size_t points = kTrajectoryPoints);

/// {"total", "impact_term", "risk_term", "method", "abs_error_estimate"} in
/// that order; absent terms are written as null.
std::string cost_json(const CostReport& cost);

struct SweepRow {
    double lambda = 0.0;
    double total = 0.0;
    double impact_term = 0.0;
    double risk_term = 0.0;
};

/// Header "lambda,total,impact_term,risk_term".
std::string sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace optexec::cli
