#ifndef CENTRALFORCE_ERRORS_HPP
#define CENTRALFORCE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace cforce {

/// invalid or incomplete configuration (bad parameter set, malformed input)
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// evaluation requested outside the declared working range or chart domain
class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

/// derivative-based quantity hit a point where it is undefined (e.g. V'(r)=0)
class SingularPointError : public std::runtime_error {
public:
    SingularPointError(const std::string& msg, double where)
        : std::runtime_error(msg), r(where) {}
    double r;   ///< offending radius
};

/// internal inconsistency detected while working on an action chart
class ChartError : public std::runtime_error {
public:
    explicit ChartError(const std::string& msg) : std::runtime_error(msg) {}
};

/// an analysis could not produce a usable result (hypothesis violation, failed fit, ...)
class AnalysisError : public std::runtime_error {
public:
    explicit AnalysisError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace cforce

#endif
