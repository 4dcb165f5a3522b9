#include "optexec/closed_form.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>

#include "optexec/numerics/quadrature.hpp"
#include "optexec/reparam.hpp"

namespace optexec {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr double kLinearThreshold = 1e-14;  // on the squared rate parameter
constexpr double kOverflowSwitch = 30.0;    // b (T - t0) beyond which exp forms are used

/// S(s) = sinh(b (T - s)) / sinh(b (T - t0)) and C(s) = cosh(b (T - s)) / sinh(b (T - t0)),
/// with the b -> 0 limit S = (T - s)/(T - t0) taken analytically.
class SinhRatio {
public:
    SinhRatio(double b_squared, double t0, double T)
        : t0_(t0), T_(T), delta_(T - t0), linear_(b_squared < kLinearThreshold),
          b_(linear_ ? 0.0 : std::sqrt(b_squared)), large_(b_ * delta_ > kOverflowSwitch) {}

    bool linear() const noexcept { return linear_; }

    double value(double s) const {
        if (s >= T_) return 0.0;
        if (linear_) return (T_ - s) / delta_;
        if (large_) {
            return std::exp(b_ * (t0_ - s)) * -std::expm1(-2.0 * b_ * (T_ - s)) /
                   -std::expm1(-2.0 * b_ * delta_);
        }
        return std::sinh(b_ * (T_ - s)) / std::sinh(b_ * delta_);
    }

    double derivative(double s) const {
        if (linear_) return -1.0 / delta_;
        return -b_ * cosh_part(s);
    }

    double second(double s) const {
        if (linear_) return 0.0;
        return b_ * b_ * value(s);
    }

    /// b coth(b (T - t0)), i.e. -S'(t0); 1/(T - t0) in the linear limit.
    double rate_at_start() const {
        if (linear_) return 1.0 / delta_;
        return b_ / std::tanh(b_ * delta_);
    }

private:
    double cosh_part(double s) const {
        if (large_) {
            return std::exp(b_ * (t0_ - s)) * (1.0 + std::exp(-2.0 * b_ * (T_ - s))) /
                   -std::expm1(-2.0 * b_ * delta_);
        }
        return std::cosh(b_ * (T_ - s)) / std::sinh(b_ * delta_);
    }

    double t0_, T_, delta_;
    bool linear_;
    double b_;
    bool large_;
};

/// Smooth prefactor P with P(t0) = 1 and its first two derivatives.
struct Prefactor {
    std::function<double(double)> value;
    std::function<double(double)> derivative;
    std::function<double(double)> second;
};

Prefactor unit_prefactor() {
    return {[](double) { return 1.0; }, [](double) { return 0.0; }, [](double) { return 0.0; }};
}

/// e^{-c (s - t0)}
Prefactor exp_prefactor(double c, double t0) {
    auto v = [c, t0](double s) { return std::exp(-c * (s - t0)); };
    return {v, [c, v](double s) { return -c * v(s); }, [c, v](double s) { return c * c * v(s); }};
}

/// cosh(a t0) / cosh(a s)
Prefactor cosh_prefactor(double a, double t0) {
    auto v = [a, t0](double s) { return std::cosh(a * t0) / std::cosh(a * s); };
    auto d = [a, v](double s) { return -a * std::tanh(a * s) * v(s); };
    auto dd = [a, v](double s) {
        const double th = std::tanh(a * s);
        return a * a * (2.0 * th * th - 1.0) * v(s);
    };
    return {v, d, dd};
}

/// x = x0 P(s) S(s), the shape shared by every hyperbolic family.
Trajectory product_trajectory(Span span, double x0, Prefactor p, SinhRatio ratio, FamilyTag tag) {
    auto value = [x0, p, ratio](double s) { return x0 * p.value(s) * ratio.value(s); };
    auto derivative = [x0, p, ratio](double s) {
        return x0 * (p.derivative(s) * ratio.value(s) + p.value(s) * ratio.derivative(s));
    };
    auto second = [x0, p, ratio](double s) {
        return x0 * (p.second(s) * ratio.value(s) + 2.0 * p.derivative(s) * ratio.derivative(s) +
                     p.value(s) * ratio.second(s));
    };
    return Trajectory::closed_form(span, value, derivative, second, std::string(to_string(tag)),
                                   "closed-form");
}

CostReport closed_cost(double total, FamilyTag tag, double extra_error = 0.0) {
    CostReport report;
    report.total = total;
    report.method_tag = "closed-form:" + std::string(to_string(tag));
    report.abs_error_estimate = 16.0 * std::numeric_limits<double>::epsilon() * std::abs(total) + extra_error;
    return report;
}

ClosedFormSolution solve_quadratic_product(double p, double t0, double T, double x0) {
    const Span span{t0, T};
    const FamilyTag tag = FamilyTag::QuadraticProductFamily;
    if (p < kLinearThreshold) {
        return {linear_schedule(t0, T, x0, "closed-form").with_method_tag("closed-form"),
                closed_cost(x0 * x0 / (T - t0), tag)};
    }
    // I(tau) = int_tau^T exp(p (tau^2/2 - z^2)) dz = e^{p tau^2/2} int_tau^T e^{-p z^2} dz,
    // so x = x0 I(tau) / I(t0) and x' = p tau x - x0 e^{-p tau^2/2} / I(t0).
    const numerics::QuadratureOptions options{1e-13, 1e-300, 30};
    auto tail = [p, T, options](double tau) {
        if (tau >= T) return numerics::QuadratureResult{};
        return numerics::integrate_adaptive(
            [p, tau](double z) { return std::exp(p * (0.5 * tau * tau - z * z)); }, tau, T, options);
    };
    const auto start = tail(t0);
    const double norm = start.value;
    auto value = [tail, x0, norm, t0](double tau) {
        if (tau == t0) return x0;
        return x0 * tail(tau).value / norm;
    };
    auto derivative = [value, p, x0, norm](double tau) {
        return p * tau * value(tau) - x0 * std::exp(-0.5 * p * tau * tau) / norm;
    };
    auto second = [value, p](double tau) { return p * (1.0 + p * tau * tau) * value(tau); };
    auto trajectory = Trajectory::closed_form(span, value, derivative, second,
                                              std::string(to_string(tag)), "closed-form");
    const double total = x0 * x0 * (std::exp(-0.5 * p * t0 * t0) / norm - p * t0);
    const double rel_quad = start.abs_error / std::abs(norm);
    return {trajectory, closed_cost(total, tag, x0 * x0 * std::exp(-0.5 * p * t0 * t0) / norm * rel_quad)};
}

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

bool finite_all(std::initializer_list<double> values) {
    for (double v : values) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

}  // namespace

std::string_view to_string(FamilyTag tag) {
    switch (tag) {
        case FamilyTag::ConstantCoefficients: return "ConstantCoefficients";
        case FamilyTag::CoshFamily: return "CoshFamily";
        case FamilyTag::ExpFamily: return "ExpFamily";
        case FamilyTag::ExpProductFamily: return "ExpProductFamily";
        case FamilyTag::ConstProductFamily: return "ConstProductFamily";
        case FamilyTag::QuadraticProductFamily: return "QuadraticProductFamily";
    }
    return "unknown";
}

SolvableFamily::SolvableFamily(Params params) : params_(std::move(params)) {
    std::visit(
        Overloaded{
            [](const ConstantCoefficientsParams& p) {
                require(finite_all({p.eta0, p.sigma0}), "ConstantCoefficients: non-finite parameter");
                require(p.eta0 > 0.0 && p.sigma0 >= 0.0, "ConstantCoefficients: need eta0 > 0, sigma0 >= 0");
            },
            [](const CoshFamilyParams& p) {
                require(finite_all({p.eta0, p.gamma, p.a, p.sigma0}), "CoshFamily: non-finite parameter");
                require(p.eta0 > 0.0 && p.gamma > 0.0 && p.sigma0 >= 0.0,
                        "CoshFamily: need eta0 > 0, gamma > 0, sigma0 >= 0");
            },
            [](const ExpFamilyParams& p) {
                require(finite_all({p.eta0, p.sigma0, p.zeta0}), "ExpFamily: non-finite parameter");
                require(p.eta0 > 0.0 && p.sigma0 >= 0.0, "ExpFamily: need eta0 > 0, sigma0 >= 0");
            },
            [](const ExpProductParams& p) {
                require(finite_all({p.alpha, p.A, p.eta0, p.sigma0}), "ExpProductFamily: non-finite parameter");
                require(p.A > 0.0 && p.eta0 > 0.0 && p.sigma0 > 0.0,
                        "ExpProductFamily: need A > 0, eta0 > 0, sigma0 > 0");
            },
            [](const ConstProductParams& p) {
                require(std::isfinite(p.p) && p.p >= 0.0, "ConstProductFamily: need finite p >= 0");
            },
            [](const QuadraticProductFamilyParams& p) {
                require(std::isfinite(p.p) && p.p >= 0.0, "QuadraticProductFamily: need finite p >= 0");
            },
        },
        params_);
}

bool SolvableFamily::trader_frame() const noexcept {
    const auto t = tag();
    return t == FamilyTag::ExpProductFamily || t == FamilyTag::ConstProductFamily ||
           t == FamilyTag::QuadraticProductFamily;
}

Trajectory linear_schedule(double t0, double T, double x0, std::string method_tag) {
    const double delta = T - t0;
    auto value = [t0, T, x0, delta](double s) { return s >= T ? 0.0 : (s == t0 ? x0 : x0 * (T - s) / delta); };
    auto derivative = [x0, delta](double) { return -x0 / delta; };
    auto second = [](double) { return 0.0; };
    return Trajectory::closed_form(Span{t0, T}, value, derivative, second, "linear", std::move(method_tag));
}

ClosedFormSolution solve_closed_form(const SolvableFamily& family, double t0, double T, double x0,
                                     double lambda) {
    if (!finite_all({t0, T, x0, lambda}) || !(T > t0) || lambda < 0.0) {
        throw std::invalid_argument("solve_closed_form: need finite t0 < T, x0 and lambda >= 0");
    }
    const Span span{t0, T};
    const FamilyTag tag = family.tag();
    return std::visit(
        Overloaded{
            [&](const ConstantCoefficientsParams& p) -> ClosedFormSolution {
                SinhRatio ratio(lambda * p.sigma0 * p.sigma0 / p.eta0, t0, T);
                auto traj = product_trajectory(span, x0, unit_prefactor(), ratio, tag);
                return {traj, closed_cost(p.eta0 * x0 * x0 * ratio.rate_at_start(), tag)};
            },
            [&](const CoshFamilyParams& p) -> ClosedFormSolution {
                SinhRatio ratio(p.a * p.a + lambda * p.sigma0 * p.sigma0 / p.eta0, t0, T);
                auto traj = product_trajectory(span, x0, cosh_prefactor(p.a, t0), ratio, tag);
                const double c = std::cosh(p.a * t0);
                const double total = p.eta0 * p.gamma * p.gamma * c * c * x0 * x0 *
                                     (ratio.rate_at_start() + p.a * std::tanh(p.a * t0));
                return {traj, closed_cost(total, tag)};
            },
            [&](const ExpFamilyParams& p) -> ClosedFormSolution {
                SinhRatio ratio(0.25 * p.zeta0 * p.zeta0 + lambda * p.sigma0 * p.sigma0 / p.eta0, t0, T);
                auto traj = product_trajectory(span, x0, exp_prefactor(0.5 * p.zeta0, t0), ratio, tag);
                const double total = p.eta0 * std::exp(p.zeta0 * t0) * x0 * x0 *
                                     (ratio.rate_at_start() + 0.5 * p.zeta0);
                return {traj, closed_cost(total, tag)};
            },
            [&](const ExpProductParams& p) -> ClosedFormSolution {
                // mu = sqrt(alpha^2 + 4 lambda sigma0^2 / eta0) / 2
                SinhRatio ratio(0.25 * p.alpha * p.alpha + lambda * p.sigma0 * p.sigma0 / p.eta0, t0, T);
                auto traj = product_trajectory(span, x0, exp_prefactor(0.5 * p.alpha, t0), ratio, tag);
                const double beta = 0.5 * std::log(p.A / (p.eta0 * p.sigma0 * p.sigma0));
                const double total = x0 * x0 * p.eta0 * std::exp(p.alpha * t0 + beta) *
                                     (0.5 * p.alpha + ratio.rate_at_start());
                return {traj, closed_cost(total, tag)};
            },
            [&](const ConstProductParams& p) -> ClosedFormSolution {
                SinhRatio ratio(p.p, t0, T);
                auto traj = product_trajectory(span, x0, unit_prefactor(), ratio, tag);
                return {traj, closed_cost(x0 * x0 * ratio.rate_at_start(), tag)};
            },
            [&](const QuadraticProductFamilyParams& p) -> ClosedFormSolution {
                return solve_quadratic_product(p.p, t0, T, x0);
            },
        },
        family.params());
}

Scenario family_scenario(const SolvableFamily& family, double t0, double T, double x0, double lambda) {
    using CF = CoefficientFunction;
    return std::visit(
        Overloaded{
            [&](const ConstantCoefficientsParams& p) {
                return Scenario(t0, T, x0, lambda, CF::constant(p.eta0), CF::constant(p.sigma0));
            },
            [&](const CoshFamilyParams& p) {
                return Scenario(t0, T, x0, lambda, CF::cosh_power(p.eta0, p.gamma, p.a, 2),
                                CF::cosh_power(p.sigma0, p.gamma, p.a, 1));
            },
            [&](const ExpFamilyParams& p) {
                return Scenario(t0, T, x0, lambda, CF::exponential(p.eta0, p.zeta0),
                                CF::exponential(p.sigma0, 0.5 * p.zeta0));
            },
            [&](const ExpProductParams& p) {
                const double beta = 0.5 * std::log(p.A / (p.eta0 * p.sigma0 * p.sigma0));
                return Scenario(t0, T, x0, lambda, CF::exponential(p.eta0 * std::exp(beta), p.alpha),
                                CF::exponential(p.sigma0 * std::exp(0.5 * beta), 0.5 * p.alpha),
                                Frame::Trader);
            },
            [&](const ConstProductParams& p) {
                return Scenario(t0, T, x0, 1.0, CF::constant(1.0), CF::constant(std::sqrt(p.p)),
                                Frame::Trader);
            },
            [&](const QuadraticProductFamilyParams& p) {
                return Scenario(t0, T, x0, 1.0, CF::constant(1.0),
                                CF::quadratic_product(std::sqrt(p.p), p.p, 0.5), Frame::Trader);
            },
        },
        family.params());
}

std::optional<SolvableFamily> detect_family(const Scenario& scenario) {
    const auto& eta = scenario.eta().params();
    const auto& sigma = scenario.sigma().params();
    const double lambda = scenario.lambda();

    // (c0, rate) for Constant and Exponential coefficients.
    auto as_exponential = [](const CoefficientFunction::Params& p) -> std::optional<std::pair<double, double>> {
        if (const auto* c = std::get_if<ConstantParams>(&p)) return std::pair{c->c0, 0.0};
        if (const auto* e = std::get_if<ExponentialParams>(&p)) return std::pair{e->c0, e->rate};
        return std::nullopt;
    };

    if (lambda == 0.0) {
        // Only eta enters the functional.
        if (auto e = as_exponential(eta)) {
            if (e->second == 0.0) return SolvableFamily(ConstantCoefficientsParams{e->first, 0.0});
            return SolvableFamily(ExpFamilyParams{e->first, 0.0, e->second});
        }
        if (const auto* c = std::get_if<CoshPowerParams>(&eta); c && c->power == 2 && c->gamma > 0.0) {
            return SolvableFamily(CoshFamilyParams{c->c0, c->gamma, c->a, 0.0});
        }
        return std::nullopt;
    }

    const auto e = as_exponential(eta);
    const auto v = as_exponential(sigma);
    if (e && v) {
        const auto [eta0, r_eta] = *e;
        const auto [sigma0, r_sigma] = *v;
        if (r_eta == 0.0 && r_sigma == 0.0) return SolvableFamily(ConstantCoefficientsParams{eta0, sigma0});
        if (2.0 * r_sigma == r_eta) return SolvableFamily(ExpFamilyParams{eta0, sigma0, r_eta});
        if (2.0 * r_sigma == -r_eta) return SolvableFamily(ConstProductParams{lambda * sigma0 * sigma0 * eta0});
        return std::nullopt;
    }

    const auto* ce = std::get_if<CoshPowerParams>(&eta);
    const auto* cs = std::get_if<CoshPowerParams>(&sigma);
    if (ce && cs) {
        if (ce->power == 2 && cs->power == 1 && ce->gamma == cs->gamma && ce->a == cs->a && ce->gamma > 0.0) {
            return SolvableFamily(CoshFamilyParams{ce->c0, ce->gamma, ce->a, cs->c0});
        }
        return std::nullopt;
    }

    const auto* ke = std::get_if<ConstantParams>(&eta);
    const auto* qs = std::get_if<QuadraticProductParams>(&sigma);
    if (ke && qs && qs->power == 0.5 && scenario.t0() == 0.0) {
        const double p = lambda * qs->c0 * qs->c0 * ke->c0;
        const double curvature = qs->k * ke->c0 * ke->c0;
        if (std::abs(curvature - p) <= 1e-12 * std::max(std::abs(p), std::abs(curvature))) {
            return SolvableFamily(QuadraticProductFamilyParams{p});
        }
    }
    return std::nullopt;
}

ClosedFormSolution solve_scenario_closed_form(const Scenario& scenario) {
    const auto family = detect_family(scenario);
    if (!family) throw std::invalid_argument("no closed-form family matches this scenario");
    if (!family->trader_frame()) {
        return solve_closed_form(*family, scenario.t0(), scenario.T(), scenario.x0(), scenario.lambda());
    }
    const Clock clock = build_clock(ClockKind::SecondParameter, scenario);
    const Span tau = clock.tau_span();
    auto in_tau = solve_closed_form(*family, tau.start, tau.end, scenario.x0(), scenario.lambda());
    auto physical = pull_back_trajectory(clock, in_tau.trajectory);
    return {physical, in_tau.cost};
}

}  // namespace optexec
