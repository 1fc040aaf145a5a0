#pragma once

#include <string>
#include <string_view>

#include "mspe/msp.hpp"

namespace mspe {

/// Parses the MSPE text format:
///
///     system   := (equation ';')+
///     equation := VAR '=' poly
///     poly     := term ('+' term)*
///     term     := coeff ('*' VAR ('^' INT)?)*
///     coeff    := INT | INT '/' INT | DECIMAL
///
/// `#` starts a line comment. VAR is an identifier ([A-Za-z_][A-Za-z0-9_]*)
/// or a bracketed name such as `[p.X.q]`. A term may also start directly
/// with a variable, meaning coefficient 1. Decimals are read as exact
/// rationals. A comment line `#@origin termination` (or
/// `strict-termination`) records that the system is a termination MSPE.
///
/// Throws ParseError (with line/column), NegativeCoefficient or
/// UndefinedVariable.
Msp parse_mspe(std::string_view text);

/// Canonical text form; parse_mspe(format_mspe(f)) == f.
std::string format_mspe(const Msp& f);

}  // namespace mspe
