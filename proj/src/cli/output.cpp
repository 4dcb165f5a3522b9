#include "optexec/cli/output.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <stdexcept>

#include "optexec/kernels.hpp"

namespace optexec::cli {

namespace {

std::string json_string(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

std::string json_number(std::optional<double> v) {
    if (!v || !std::isfinite(*v)) return "null";
    return format_number(*v);
}

}  // namespace

std::string format_number(double value) {
    std::array<char, 64> buffer{};
    const auto [end, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
    if (ec != std::errc()) throw std::runtime_error("format_number: conversion failed");
    return std::string(buffer.data(), end);
}

std::string trajectory_csv(const Trajectory& trajectory, std::size_t points) {
    const Span span = trajectory.span();
    const auto grid = kernels::uniform_grid(span.start, span.end, points);
    std::vector<double> x(points), dx(points);
    kernels::sample([&trajectory](double s) { return trajectory.value(s); }, grid, x);
    kernels::sample([&trajectory](double s) { return trajectory.derivative(s); }, grid, dx);
    std::string out = "s,x,dxds\n";
    for (std::size_t i = 0; i < points; ++i) {
        out += format_number(grid[i]);
        out += ',';
        out += format_number(x[i]);
        out += ',';
        out += format_number(dx[i]);
        out += '\n';
    }
    return out;
}

std::string cost_json(const CostReport& cost) {
    std::string out = "{\n";
    out += "  \"total\": " + json_number(cost.total) + ",\n";
    out += "  \"impact_term\": " + json_number(cost.impact_term) + ",\n";
    out += "  \"risk_term\": " + json_number(cost.risk_term) + ",\n";
    out += "  \"method\": " + json_string(cost.method_tag) + ",\n";
    out += "  \"abs_error_estimate\": " + json_number(cost.abs_error_estimate) + "\n";
    out += "}\n";
    return out;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::string out = "lambda,total,impact_term,risk_term\n";
    for (const auto& r : rows) {
        out += format_number(r.lambda) + "," + format_number(r.total) + "," + format_number(r.impact_term) + "," +
               format_number(r.risk_term) + "\n";
    }
    return out;
}

}  // namespace optexec::cli
