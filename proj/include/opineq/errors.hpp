#ifndef OPINEQ_ERRORS_HPP
#define OPINEQ_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace opineq {

// Base class for everything this library throws on bad input or
// failed numeric contracts.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class NotSquare : public Error {
public:
    using Error::Error;
};

class NotHermitian : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class ConvergenceFailure : public Error {
public:
    using Error::Error;
};

class DomainViolation : public Error {
public:
    using Error::Error;
};

class ShapeMismatch : public Error {
public:
    using Error::Error;
};

class NotUnital : public Error {
public:
    using Error::Error;
};

class NotIsometry : public Error {
public:
    using Error::Error;
};

class LengthMismatch : public Error {
public:
    using Error::Error;
};

class UnknownFunction : public Error {
public:
    using Error::Error;
};

class BadParameter : public Error {
public:
    using Error::Error;
};

class UnknownClaim : public Error {
public:
    using Error::Error;
};

class NonPositiveFunction : public Error {
public:
    using Error::Error;
};

class MissingDerivative : public Error {
public:
    using Error::Error;
};

class GenerationFailure : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

// Thrown by claim evaluators when a precondition of the claim fails.
// Carries the names of the hypotheses that did not hold.
class HypothesisViolation : public Error {
public:
    HypothesisViolation(const std::string& claim_id, std::vector<std::string> failed)
        : Error(compose(claim_id, failed)), claim_id_(claim_id), failed_(std::move(failed)) {}

    const std::string& claim_id() const { return claim_id_; }
    const std::vector<std::string>& failed_hypotheses() const { return failed_; }

private:
    static std::string compose(const std::string& claim_id, const std::vector<std::string>& failed) {
        std::string msg = "hypothesis violation for " + claim_id + ":";
        for (const auto& f : failed) msg += " [" + f + "]";
        return msg;
    }

    std::string claim_id_;
    std::vector<std::string> failed_;
};

} // namespace opineq

#endif
