#pragma once

// CSV serialization for signals (`t,value`), coefficient vectors
// (`index,value`, 1-based) and solver traces. Numbers are written in the
// shortest form that reads back to the same double.

#include <iosfwd>
#include <string>

#include "dtigra/seqspace.hpp"
#include "dtigra/signal.hpp"
#include "dtigra/solvers.hpp"

namespace dtigra::csv {

std::string format_double(double v);

void write_signal(std::ostream& os, const Signal& s);
void write_coefficients(std::ostream& os, const CoefVec& x);
void write_trace(std::ostream& os, const SolverTrace& trace);

/// Parsers throw std::runtime_error on a bad header, malformed rows or
/// non-contiguous indices.
Signal read_signal(std::istream& is);
CoefVec read_coefficients(std::istream& is);

}  // namespace dtigra::csv
