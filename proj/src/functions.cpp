#include "opineq/functions.hpp"

#include <cmath>
#include <cstdio>

namespace opineq {

namespace {

// compact decimal for spec strings: 2 -> "2", 1.5 -> "1.5"
std::string format_param(double p) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", p);
    return buf;
}

} // namespace

ScalarFunction::ScalarFunction(std::string name, Interval domain,
                               std::function<double(double)> eval,
                               std::optional<std::function<double(double)>> derivative,
                               Flags flags)
    : name_(std::move(name)), domain_(domain), eval_(std::move(eval)),
      derivative_(std::move(derivative)), flags_(flags) {
    // Lemma-level sanity: a superquadratic function cannot be positive at 0.
    if (flags_.superquadratic && domain_.contains(0.0) && eval_(0.0) > 0.0)
        throw BadParameter("function " + name_ + " flagged superquadratic but f(0) > 0");
}

double ScalarFunction::eval_clamped(double t, double domain_tol) const {
    if (!domain_.contains(t, domain_tol))
        throw DomainViolation("argument " + std::to_string(t) + " outside domain of " + name_);
    return eval_(domain_.clamp(t));
}

double ScalarFunction::derivative(double t) const {
    if (!derivative_) throw MissingDerivative("function " + name_ + " has no derivative");
    return (*derivative_)(t);
}

double ScalarFunction::support_constant(double x) const {
    if (support_) return (*support_)(x);
    if (derivative_) return (*derivative_)(x);
    const double h = 1e-6 * std::max(1.0, std::abs(x));
    const double lo = domain_.clamp(x - h);
    const double hi = domain_.clamp(x + h);
    if (hi <= lo) return 0.0;
    return (eval_(hi) - eval_(lo)) / (hi - lo);
}

ScalarFunction ScalarFunction::with_support_constant(std::function<double(double)> c) const {
    ScalarFunction out = *this;
    out.support_ = std::move(c);
    return out;
}

ScalarFunction builtin(const std::string& name, double param) {
    using Flags = ScalarFunction::Flags;
    if (name == "pow") {
        const double p = param;
        if (p < 1.0) throw BadParameter("pow requires exponent >= 1");
        Flags flags;
        flags.superquadratic = p >= 2.0;
        flags.subquadratic = p <= 2.0;
        flags.convex = true;
        flags.nonnegative = true;
        auto eval = [p](double t) { return std::pow(t, p); };
        auto deriv = [p](double t) { return p * std::pow(t, p - 1.0); };
        return ScalarFunction("pow:" + format_param(p), Interval::nonnegative_reals(), eval,
                              deriv, flags);
    }
    if (name == "square_minus_c") {
        const double c = param;
        if (c < 0.0) throw BadParameter("square_minus_c requires c >= 0");
        Flags flags;
        flags.superquadratic = true;
        flags.subquadratic = c == 0.0;
        flags.convex = true;
        flags.nonnegative = c == 0.0;
        auto eval = [c](double t) { return t * t - c; };
        auto deriv = [](double t) { return 2.0 * t; };
        return ScalarFunction("sqmc:" + format_param(c), Interval::nonnegative_reals(), eval,
                              deriv, flags);
    }
    if (name == "abs") {
        Flags flags;
        flags.subquadratic = true;
        flags.convex = true;
        flags.nonnegative = true;
        auto eval = [](double t) { return std::abs(t); };
        ScalarFunction f("abs", Interval::all_reals(), eval, std::nullopt, flags);
        // subdifferential of |t| at 0 is [-1,1]; pick the symmetric choice 0
        return f.with_support_constant([](double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); });
    }
    if (name == "identity") {
        Flags flags;
        flags.subquadratic = true;
        flags.convex = true;
        flags.concave = true;
        auto eval = [](double t) { return t; };
        auto deriv = [](double) { return 1.0; };
        return ScalarFunction("id", Interval::all_reals(), eval, deriv, flags);
    }
    if (name == "exp_centered") {
        Flags flags;
        flags.superquadratic = true;
        flags.convex = true;
        flags.nonnegative = true;
        auto eval = [](double t) { return std::exp(t) - t - 1.0; };
        auto deriv = [](double t) { return std::exp(t) - 1.0; };
        return ScalarFunction("expc", Interval::nonnegative_reals(), eval, deriv, flags);
    }
    if (name == "relu_power") {
        const double p = param;
        if (p < 2.0) throw BadParameter("relu_power requires exponent >= 2");
        Flags flags;
        flags.convex = true;
        flags.nonnegative = true;
        auto eval = [p](double t) { return t > 0.0 ? std::pow(t, p) : 0.0; };
        auto deriv = [p](double t) { return t > 0.0 ? p * std::pow(t, p - 1.0) : 0.0; };
        return ScalarFunction("relupow:" + format_param(p), Interval::all_reals(), eval, deriv,
                              flags);
    }
    throw UnknownFunction("no catalog entry named '" + name + "'");
}

ScalarFunction parse_function_spec(const std::string& spec) {
    std::string head = spec;
    double param = 0.0;
    bool has_param = false;
    if (const auto pos = spec.find(':'); pos != std::string::npos) {
        head = spec.substr(0, pos);
        try {
            param = std::stod(spec.substr(pos + 1));
        } catch (const std::exception&) {
            throw BadParameter("cannot parse parameter in function spec '" + spec + "'");
        }
        has_param = true;
    }
    if (head == "pow") {
        if (!has_param) throw BadParameter("pow needs a parameter, e.g. pow:2");
        return builtin("pow", param);
    }
    if (head == "sqmc") {
        if (!has_param) throw BadParameter("sqmc needs a parameter, e.g. sqmc:1");
        return builtin("square_minus_c", param);
    }
    if (head == "abs") return builtin("abs");
    if (head == "id") return builtin("identity");
    if (head == "expc") return builtin("exp_centered");
    if (head == "relupow") {
        if (!has_param) throw BadParameter("relupow needs a parameter, e.g. relupow:2");
        return builtin("relu_power", param);
    }
    throw UnknownFunction("unknown function spec '" + spec + "'");
}

DefinitionCheckReport check_superquadratic_grid(const ScalarFunction& f,
                                                const std::vector<double>& xs,
                                                const std::vector<double>& ts, double tol_def) {
    DefinitionCheckReport report;
    report.function_name = f.name();
    report.grid_note = std::to_string(xs.size()) + "x" + std::to_string(ts.size()) + " grid";
    bool first = true;
    for (double x : xs) {
        if (!f.domain().contains(x)) throw DomainViolation("grid point x outside domain");
        const double fx = f(x);
        const double cx = f.support_constant(x);
        for (double t : ts) {
            if (!f.domain().contains(t)) throw DomainViolation("grid point t outside domain");
            const double residual = f(t) - fx - cx * (t - x) - f(std::abs(t - x));
            if (first || residual < report.min_residual) report.min_residual = residual;
            if (first || residual > report.max_residual) report.max_residual = residual;
            first = false;
            if (residual < -tol_def) {
                report.violations.push_back({x, t, residual});
                report.max_violation = std::max(report.max_violation, -residual);
            }
        }
    }
    return report;
}

DefinitionCheckReport check_convex_support(const ScalarFunction& f, const std::vector<double>& xs,
                                           const std::vector<double>& ts, double tol_def) {
    DefinitionCheckReport report;
    report.function_name = f.name();
    report.grid_note = std::to_string(xs.size()) + "x" + std::to_string(ts.size()) + " grid";
    bool first = true;
    for (double x : xs) {
        if (!f.domain().contains(x)) throw DomainViolation("grid point x outside domain");
        const double fx = f(x);
        const double cx = f.support_constant(x);
        for (double t : ts) {
            if (!f.domain().contains(t)) throw DomainViolation("grid point t outside domain");
            const double residual = f(t) - fx - cx * (t - x);
            if (first || residual < report.min_residual) report.min_residual = residual;
            if (first || residual > report.max_residual) report.max_residual = residual;
            first = false;
            if (residual < -tol_def) {
                report.violations.push_back({x, t, residual});
                report.max_violation = std::max(report.max_violation, -residual);
            }
        }
    }
    return report;
}

HermitianMatrix apply_function(const ScalarFunction& f, const HermitianMatrix& a) {
    return apply_spectral_function(a, [&f](double t) { return f(t); }, f.domain());
}

double function_sup_norm(const ScalarFunction& f, const HermitianMatrix& a) {
    return function_sup_norm([&f](double t) { return f(t); }, a);
}

double midpoint_convexity_margin(const std::function<double(double)>& f, double lo, double hi,
                                 int samples) {
    double margin = 0.0;
    bool first = true;
    for (int i = 0; i < samples; ++i) {
        for (int j = i; j < samples; ++j) {
            const double a = lo + (hi - lo) * i / (samples - 1);
            const double b = lo + (hi - lo) * j / (samples - 1);
            const double m = f(a) + f(b) - 2.0 * f(0.5 * (a + b));
            if (first || m < margin) margin = m;
            first = false;
        }
    }
    return margin;
}

std::vector<double> log_spaced_grid(double lo, double hi, int n) {
    if (lo <= 0.0 || hi <= lo || n < 2) throw BadParameter("log_spaced_grid: bad parameters");
    std::vector<double> g(static_cast<size_t>(n));
    const double llo = std::log(lo);
    const double lhi = std::log(hi);
    for (int i = 0; i < n; ++i)
        g[static_cast<size_t>(i)] = std::exp(llo + (lhi - llo) * i / (n - 1));
    g.back() = hi;
    return g;
}

std::vector<double> linear_grid(double lo, double hi, int n) {
    if (n < 2) throw BadParameter("linear_grid: need at least 2 points");
    std::vector<double> g(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) g[static_cast<size_t>(i)] = lo + (hi - lo) * i / (n - 1);
    return g;
}

} // namespace opineq
