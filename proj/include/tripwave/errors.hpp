#pragma once

#include <stdexcept>
#include <string>

namespace tripwave {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class InvalidParams : public Error {
public:
    explicit InvalidParams(const std::string& constraint)
        : Error("invalid parameters: " + constraint) {}
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error("config: " + what) {}
};

class HypothesisViolated : public Error {
public:
    explicit HypothesisViolated(const std::string& condition)
        : Error("hypothesis violated: " + condition), condition_(condition) {}
    const std::string& condition() const { return condition_; }

private:
    std::string condition_;
};

class NoCoexistenceState : public Error {
public:
    NoCoexistenceState() : Error("no positive co-existence state for these parameters") {}
};

class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error(what) {}
};

class RootBracketFailure : public Error {
public:
    explicit RootBracketFailure(const std::string& what) : Error("root bracketing failed: " + what) {}
};

class EigenSolveFailure : public Error {
public:
    explicit EigenSolveFailure(const std::string& what) : Error("eigenvalue solve failed: " + what) {}
};

class StepSizeError : public Error {
public:
    explicit StepSizeError(const std::string& what) : Error("step size error: " + what) {}
};

class CFLViolation : public Error {
public:
    explicit CFLViolation(const std::string& what) : Error("CFL violation: " + what) {}
};

class BlowUp : public Error {
public:
    explicit BlowUp(const std::string& what) : Error("solution blow-up: " + what) {}
};

class InsufficientData : public Error {
public:
    explicit InsufficientData(const std::string& what) : Error("insufficient data: " + what) {}
};

class NewtonDivergence : public Error {
public:
    explicit NewtonDivergence(const std::string& what) : Error("Newton iteration failed: " + what) {}
};

class NonPositiveProfile : public Error {
public:
    explicit NonPositiveProfile(const std::string& what) : Error("profile not positive: " + what) {}
};

class NoFront : public Error {
public:
    explicit NoFront(const std::string& what) : Error("no front: " + what) {}
};

} // namespace tripwave
