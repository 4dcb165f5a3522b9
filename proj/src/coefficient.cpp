#include "optexec/coefficient.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace optexec {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_finite(std::initializer_list<double> values, std::string_view what) {
    for (double v : values) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument(std::string(what) + ": parameters must be finite");
        }
    }
}

std::string fmt_time(double t) {
    std::ostringstream out;
    out.precision(17);
    out << t;
    return out.str();
}

}  // namespace

std::string_view to_string(CoefficientFamily family) {
    switch (family) {
        case CoefficientFamily::Constant: return "Constant";
        case CoefficientFamily::Exponential: return "Exponential";
        case CoefficientFamily::CoshPower: return "CoshPower";
        case CoefficientFamily::QuadraticProduct: return "QuadraticProduct";
        case CoefficientFamily::Tabulated: return "Tabulated";
    }
    return "unknown";
}

CoefficientFunction::CoefficientFunction(Params params) : params_(std::move(params)) {}

CoefficientFunction CoefficientFunction::constant(double c0) {
    require_finite({c0}, "Constant");
    return CoefficientFunction(ConstantParams{c0});
}

CoefficientFunction CoefficientFunction::exponential(double c0, double rate) {
    require_finite({c0, rate}, "Exponential");
    return CoefficientFunction(ExponentialParams{c0, rate});
}

CoefficientFunction CoefficientFunction::cosh_power(double c0, double gamma, double a, int power) {
    require_finite({c0, gamma, a}, "CoshPower");
    if (power != 1 && power != 2) throw std::invalid_argument("CoshPower: power must be 1 or 2");
    return CoefficientFunction(CoshPowerParams{c0, gamma, a, power});
}

CoefficientFunction CoefficientFunction::quadratic_product(double c0, double k, double power) {
    require_finite({c0, k, power}, "QuadraticProduct");
    if (power != 1.0 && power != 0.5) {
        throw std::invalid_argument("QuadraticProduct: power must be 1 or 0.5");
    }
    return CoefficientFunction(QuadraticProductParams{c0, k, power});
}

CoefficientFunction CoefficientFunction::tabulated(std::vector<double> knots, std::vector<double> values) {
    if (knots.size() < 4) throw std::invalid_argument("Tabulated: at least 4 knots required");
    CoefficientFunction fn(TabulatedParams{knots, values});
    fn.table_ = std::make_shared<numerics::MonotoneCubic>(std::move(knots), std::move(values));
    return fn;
}

CoefficientFamily CoefficientFunction::family() const noexcept {
    return static_cast<CoefficientFamily>(params_.index());
}

double CoefficientFunction::value(double s) const {
    return std::visit(
        Overloaded{
            [](const ConstantParams& p) { return p.c0; },
            [s](const ExponentialParams& p) { return p.c0 * std::exp(p.rate * s); },
            [s](const CoshPowerParams& p) {
                const double c = std::cosh(p.a * s);
                return p.power == 1 ? p.c0 * p.gamma * c : p.c0 * p.gamma * p.gamma * c * c;
            },
            [s](const QuadraticProductParams& p) {
                const double q = 1.0 + p.k * s * s;
                return p.power == 1.0 ? p.c0 * q : p.c0 * std::sqrt(q);
            },
            [this, s](const TabulatedParams&) { return table_->value(s); },
        },
        params_);
}

double CoefficientFunction::derivative(double s) const {
    return std::visit(
        Overloaded{
            [](const ConstantParams&) { return 0.0; },
            [s](const ExponentialParams& p) { return p.c0 * p.rate * std::exp(p.rate * s); },
            [s](const CoshPowerParams& p) {
                if (p.power == 1) return p.c0 * p.gamma * p.a * std::sinh(p.a * s);
                return p.c0 * p.gamma * p.gamma * p.a * std::sinh(2.0 * p.a * s);
            },
            [s](const QuadraticProductParams& p) {
                const double q = 1.0 + p.k * s * s;
                const double dq = 2.0 * p.k * s;
                return p.power == 1.0 ? p.c0 * dq : p.c0 * dq / (2.0 * std::sqrt(q));
            },
            [this, s](const TabulatedParams&) { return table_->derivative(s); },
        },
        params_);
}

double CoefficientFunction::second_derivative(double s) const {
    return std::visit(
        Overloaded{
            [](const ConstantParams&) { return 0.0; },
            [s](const ExponentialParams& p) {
                return p.c0 * p.rate * p.rate * std::exp(p.rate * s);
            },
            [s](const CoshPowerParams& p) {
                if (p.power == 1) return p.c0 * p.gamma * p.a * p.a * std::cosh(p.a * s);
                return 2.0 * p.c0 * p.gamma * p.gamma * p.a * p.a * std::cosh(2.0 * p.a * s);
            },
            [s](const QuadraticProductParams& p) {
                const double q = 1.0 + p.k * s * s;
                const double dq = 2.0 * p.k * s;
                if (p.power == 1.0) return 2.0 * p.c0 * p.k;
                const double root = std::sqrt(q);
                return p.c0 * (2.0 * p.k / (2.0 * root) - dq * dq / (4.0 * q * root));
            },
            [this, s](const TabulatedParams&) { return table_->second_derivative(s); },
        },
        params_);
}

std::vector<double> CoefficientFunction::breakpoints(const Span& span) const {
    std::vector<double> out;
    if (const auto* p = std::get_if<TabulatedParams>(&params_)) {
        for (double k : p->knots) {
            if (k > span.start && k < span.end) out.push_back(k);
        }
    }
    return out;
}

void CoefficientFunction::require_positive(const Span& span, std::string_view name,
                                           bool allow_zero) const {
    auto ok = [allow_zero](double v) { return allow_zero ? v >= 0.0 : v > 0.0; };
    const std::string relation = allow_zero ? "nonnegative" : "positive";
    auto fail_at = [&](double t) {
        throw std::invalid_argument(std::string(name) + " must be " + relation +
                                    " on the scenario span; violated at s = " + fmt_time(t));
    };
    auto fail = [&](const std::string& why) {
        throw std::invalid_argument(std::string(name) + " must be " + relation + ": " + why);
    };
    std::visit(
        Overloaded{
            [&](const ConstantParams& p) {
                if (!ok(p.c0)) fail_at(span.start);
            },
            [&](const ExponentialParams& p) {
                if (!ok(p.c0)) fail_at(span.start);
            },
            [&](const CoshPowerParams& p) {
                const double scale = p.power == 1 ? p.c0 * p.gamma : p.c0 * p.gamma * p.gamma;
                if (!ok(scale)) fail_at(span.start);
            },
            [&](const QuadraticProductParams& p) {
                if (!ok(p.c0)) fail_at(span.start);
                if (p.k < 0.0) {
                    const double far = std::abs(span.start) > std::abs(span.end) ? span.start : span.end;
                    if (!(1.0 + p.k * far * far > 0.0)) fail_at(far);
                }
            },
            [&](const TabulatedParams& p) {
                if (p.knots.front() > span.start || p.knots.back() < span.end) {
                    fail("tabulated knots must cover the scenario span");
                }
                for (std::size_t i = 0; i < p.knots.size(); ++i) {
                    if (!ok(p.values[i])) fail_at(p.knots[i]);
                }
                constexpr std::size_t grid = 1024;
                for (std::size_t i = 0; i < grid; ++i) {
                    const double t = span.uniform_point(i, grid);
                    if (!ok(table_->value(t))) fail_at(t);
                }
            },
        },
        params_);
}

}  // namespace optexec
