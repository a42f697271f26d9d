#pragma once

#include <stdexcept>
#include <string>

namespace eigenrank {

// Base class for every failure raised by the library. `module()` names the
// component that detected the problem so the CLI can report it.
class Error : public std::runtime_error {
  public:
    Error(std::string module, const std::string &what)
        : std::runtime_error("[" + module + "] " + what),
          m_module(std::move(module)) {}

    const std::string &module() const noexcept { return m_module; }

  private:
    std::string m_module;
};

class InvalidArgument : public Error {
  public:
    using Error::Error;
};

// Iterative eigensolver ran out of budget; carries the best residual reached.
class ConvergenceError : public Error {
  public:
    ConvergenceError(const std::string &what, double best_residual)
        : Error("eigensolve", what), m_best_residual(best_residual) {}

    double best_residual() const noexcept { return m_best_residual; }

  private:
    double m_best_residual;
};

// Config document problems. `field()` is a dotted path such as "sweep.eps[0]";
// `line()` is 1-based, or 0 when unknown.
class ConfigError : public Error {
  public:
    ConfigError(std::string field, const std::string &what, int line = 0)
        : Error("config", format(field, what, line)), m_field(std::move(field)),
          m_line(line), m_detail(what) {}

    const std::string &field() const noexcept { return m_field; }
    // The message without the field and line prefix.
    const std::string &detail() const noexcept { return m_detail; }
    int line() const noexcept { return m_line; }

  private:
    static std::string format(const std::string &field, const std::string &what,
                              int line) {
        std::string out;
        if (line > 0)
            out += "line " + std::to_string(line) + ": ";
        if (!field.empty())
            out += field + ": ";
        return out + what;
    }

    std::string m_field;
    int m_line;
    std::string m_detail;
};

} // namespace eigenrank
