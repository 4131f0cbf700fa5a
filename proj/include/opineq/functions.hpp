#ifndef OPINEQ_FUNCTIONS_HPP
#define OPINEQ_FUNCTIONS_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "opineq/matrix.hpp"
#include "opineq/spectral.hpp"

namespace opineq {

/// A real scalar function together with the side data the inequality
/// evaluators need: a support constant C_x (the slope of the supporting
/// line, or the superquadraticity constant), an optional derivative, and
/// class flags. Values are immutable closures; copying is cheap.
class ScalarFunction {
public:
    struct Flags {
        bool superquadratic = false;
        bool subquadratic = false;
        bool convex = false;
        bool concave = false;
        bool nonnegative = false;
    };

    ScalarFunction() = default;
    ScalarFunction(std::string name, Interval domain, std::function<double(double)> eval,
                   std::optional<std::function<double(double)>> derivative, Flags flags);

    const std::string& name() const { return name_; }
    const Interval& domain() const { return domain_; }
    const Flags& flags() const { return flags_; }
    bool has_derivative() const { return derivative_.has_value(); }

    double operator()(double t) const { return eval_(t); }

    /// Evaluates after clamping t into the domain; t farther than
    /// domain_tol outside raises DomainViolation.
    double eval_clamped(double t, double domain_tol = 1e-9) const;

    double derivative(double t) const;

    /// C_x: the stored closed form when present, otherwise the derivative,
    /// otherwise a central difference with step 1e-6 * max(1, |x|).
    double support_constant(double x) const;

    /// Replaces the support-constant rule (for experiments with
    /// non-canonical constants in the superquadraticity inequality).
    ScalarFunction with_support_constant(std::function<double(double)> c) const;

private:
    std::string name_;
    Interval domain_{0.0, 0.0};
    std::function<double(double)> eval_;
    std::optional<std::function<double(double)>> derivative_;
    std::optional<std::function<double(double)>> support_;
    Flags flags_;
};

/// One grid cell where a pointwise definition failed.
struct DefinitionViolation {
    double x = 0.0;
    double t = 0.0;
    double residual = 0.0;
};

/// Result of scanning a definition over a grid. `max_violation` is the
/// largest magnitude among the recorded violations (0 when the grid is
/// clean); min/max_residual track the raw residual range. Grid evidence
/// only; a clean report is "no violation found on grid", not a proof.
struct DefinitionCheckReport {
    std::string function_name;
    std::string grid_note;
    std::vector<DefinitionViolation> violations;
    double max_violation = 0.0;
    double min_residual = 0.0;
    double max_residual = 0.0;
};

/// Catalog constructor. Known names (with the CLI spec string in
/// parentheses): pow(p) ("pow:p"), square_minus_c(c) ("sqmc:c"),
/// abs ("abs"), identity ("id"), exp_centered ("expc"),
/// relu_power(p) ("relupow:p").
ScalarFunction builtin(const std::string& name, double param = 0.0);

/// Parses a spec string such as "pow:2.5" or "abs" into a catalog entry.
ScalarFunction parse_function_spec(const std::string& spec);

/// Scans residual(x,t) = f(t) - f(x) - C_x (t-x) - f(|t-x|) over the grid
/// and reports every residual below -tol_def.
DefinitionCheckReport check_superquadratic_grid(const ScalarFunction& f,
                                                const std::vector<double>& xs,
                                                const std::vector<double>& ts, double tol_def);

/// Scans residual(x,t) = f(t) - f(x) - C_x (t-x) over the grid.
DefinitionCheckReport check_convex_support(const ScalarFunction& f, const std::vector<double>& xs,
                                           const std::vector<double>& ts, double tol_def);

/// f(A) for a catalog function: functional calculus over f's domain with
/// the standard clamping tolerance.
HermitianMatrix apply_function(const ScalarFunction& f, const HermitianMatrix& a);

/// sup over spec(A) of |f(lambda)|.
double function_sup_norm(const ScalarFunction& f, const HermitianMatrix& a);

/// Midpoint-convexity scan of an arbitrary callable over [lo, hi]:
/// returns the minimum of f(a)+f(b)-2f((a+b)/2) over sample pairs.
double midpoint_convexity_margin(const std::function<double(double)>& f, double lo, double hi,
                                 int samples = 64);

/// n log-spaced points over (lo, hi], lo > 0.
std::vector<double> log_spaced_grid(double lo, double hi, int n);

/// n evenly spaced points over [lo, hi].
std::vector<double> linear_grid(double lo, double hi, int n);

} // namespace opineq

#endif
