#ifndef PASV_ERRORS_HPP
#define PASV_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace pasv {

/// Root-finding bracket does not enclose a sign change.
struct bracket_error : std::runtime_error {
    explicit bracket_error(const std::string& what) : std::runtime_error(what) {}
};

/// Fock-space truncation is too small for the requested state or operation.
struct cutoff_error : std::runtime_error {
    explicit cutoff_error(const std::string& what) : std::runtime_error(what) {}
};

/// An iterative scheme failed its convergence certificate (step size, shell sum, ...).
struct convergence_error : std::runtime_error {
    explicit convergence_error(const std::string& what) : std::runtime_error(what) {}
};

/// Quadrature domain too small: kernel or state mass leaks past the grid boundary.
struct padding_error : std::runtime_error {
    explicit padding_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace pasv

#endif
