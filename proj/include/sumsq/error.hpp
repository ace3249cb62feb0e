#ifndef SUMSQ_ERROR_HPP
#define SUMSQ_ERROR_HPP

#include <stdexcept>
#include <string>

namespace sumsq {

// Machine-readable error codes, mirrored verbatim in CLI diagnostics.
enum class Errc {
    precision_violation,
    variable_mismatch,
    order_too_low,
    not_a_unit,
    constant_term_not_one,
    not_divisible,
    zero_up_to_truncation,
    not_regular,
    order_unknown,
    invalid_ode_system,
    not_within_determinacy_ball,
    decomposition_failed,
    parse_error,
    not_an_obstruction_case,
    side_condition_violated,
    inconsistent_input,
    division_failed,
    order_out_of_range,
    internal,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
    Errc code() const { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

} // namespace sumsq

#endif
