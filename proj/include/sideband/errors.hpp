#pragma once

#include <stdexcept>
#include <string>

namespace sideband {

// gate() is the name printed by the CLI on failure.
class Error : public std::runtime_error {
public:
    Error(std::string gate, const std::string& what)
        : std::runtime_error(gate + ": " + what), gate_(std::move(gate))
    {
    }
    const std::string& gate() const noexcept { return gate_; }

private:
    std::string gate_;
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error("ConfigError", what) {}
};

class ValidityError : public Error {
public:
    explicit ValidityError(const std::string& what) : Error("ValidityError", what) {}
};

class InstabilityError : public Error {
public:
    InstabilityError(double gamma_tot, const std::string& what)
        : Error("InstabilityError", what), gamma_tot_(gamma_tot)
    {
    }
    double gamma_tot() const noexcept { return gamma_tot_; }

private:
    double gamma_tot_;
};

class UnbalancedError : public Error {
public:
    explicit UnbalancedError(const std::string& what) : Error("UnbalancedError", what) {}
};

class StepSizeError : public Error {
public:
    explicit StepSizeError(const std::string& what) : Error("StepSizeError", what) {}
};

class NonConvergence : public Error {
public:
    explicit NonConvergence(const std::string& what) : Error("NonConvergence", what) {}
};

class DegenerateData : public Error {
public:
    explicit DegenerateData(const std::string& what) : Error("DegenerateData", what) {}
};

class RankDeficient : public Error {
public:
    explicit RankDeficient(const std::string& what) : Error("RankDeficient", what) {}
};

} // namespace sideband
