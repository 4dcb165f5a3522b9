#pragma once

#include <optional>
#include <string_view>
#include <variant>

#include "optexec/model_core.hpp"
#include "optexec/scenario.hpp"
#include "optexec/trajectory.hpp"

namespace optexec {

enum class FamilyTag {
    ConstantCoefficients,
    CoshFamily,
    ExpFamily,
    ExpProductFamily,
    ConstProductFamily,
    QuadraticProductFamily,
};

std::string_view to_string(FamilyTag tag);

/// eta = eta0, sigma = sigma0.
struct ConstantCoefficientsParams {
    double eta0;
    double sigma0;
};

/// eta = eta0 gamma^2 cosh^2(a s), sigma = sigma0 gamma cosh(a s).
struct CoshFamilyParams {
    double eta0;
    double gamma;
    double a;
    double sigma0;
};

/// eta = eta0 e^{zeta0 s}, sigma = sigma0 e^{zeta0 s / 2}.
struct ExpFamilyParams {
    double eta0;
    double sigma0;
    double zeta0;
};

/// Trader-time family of the first-parameter clock: eta sigma^2 = A e^{2 alpha tau}
/// with log-coefficients referenced to (eta0, sigma0), so that
/// A = eta0 sigma0^2 e^{2 beta}. The trajectory solves x'' + alpha x' = (lambda sigma0^2/eta0) x.
struct ExpProductParams {
    double alpha;
    double A;
    double eta0;
    double sigma0;
};

/// Trader-time family of the second-parameter clock with
/// lambda sigma^2 eta = p constant (p already includes lambda).
struct ConstProductParams {
    double p;
};

/// Trader-time family of the second-parameter clock with
/// lambda sigma^2 eta = p (1 + p tau^2); the log-derivative is F = p tau.
struct QuadraticProductFamilyParams {
    double p;
};

/// An exactly solvable coefficient family with its parameters.
class SolvableFamily {
public:
    using Params = std::variant<ConstantCoefficientsParams, CoshFamilyParams, ExpFamilyParams,
                                ExpProductParams, ConstProductParams, QuadraticProductFamilyParams>;

    /// Validates: eta0, gamma, A > 0; sigma0, p >= 0 (ExpProduct: sigma0 > 0);
    /// everything finite. Throws std::invalid_argument.
    explicit SolvableFamily(Params params);

    FamilyTag tag() const noexcept { return static_cast<FamilyTag>(params_.index()); }
    const Params& params() const noexcept { return params_; }

    /// True for the families whose closed form lives in trader time.
    bool trader_frame() const noexcept;

private:
    Params params_;
};

struct ClosedFormSolution {
    Trajectory trajectory;
    CostReport cost;
};

/// Closed-form optimal trajectory and boundary-evaluated cost over
/// [t0, T] (trader families: [tau0, tauF]). Families whose squared rate
/// parameter falls below 1e-14 switch to the analytic linear limit.
/// `lambda` is ignored by ConstProduct and QuadraticProduct, whose p
/// already carries it.
ClosedFormSolution solve_closed_form(const SolvableFamily& family, double t0, double T, double x0,
                                     double lambda);

/// A scenario, in the family's own time frame, whose optimum is the
/// family's closed form (trader families use lambda = 1 with p folded into
/// sigma, except ExpProduct which keeps lambda).
Scenario family_scenario(const SolvableFamily& family, double t0, double T, double x0, double lambda);

/// Exact tag matching on the parametric coefficient families; Tabulated
/// coefficients never match. Recognised pairs:
///   Constant/Constant                      -> ConstantCoefficients
///   CoshPower(2)/CoshPower(1), same gamma,a -> CoshFamily
///   Exponential(r)/Exponential(r/2)        -> ExpFamily
///   Exponential(r)/Exponential(-r/2)       -> ConstProductFamily (second-parameter clock)
///   Constant/QuadraticProduct(power 1/2), t0 = 0,
///       k eta0^2 = lambda c0^2 eta0        -> QuadraticProductFamily (second-parameter clock)
/// With lambda = 0 only eta matters and sigma is ignored.
std::optional<SolvableFamily> detect_family(const Scenario& scenario);

/// detect_family followed by solve_closed_form; trader-frame families are
/// solved on the second-parameter clock and pulled back to physical time.
/// Throws std::invalid_argument when no family matches.
ClosedFormSolution solve_scenario_closed_form(const Scenario& scenario);

/// The linear schedule x0 (T - s)/(T - t0).
Trajectory linear_schedule(double t0, double T, double x0, std::string method_tag);

}  // namespace optexec
