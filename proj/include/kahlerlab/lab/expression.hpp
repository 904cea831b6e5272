#pragma once

#include <functional>
#include <string>

#include "kahlerlab/types.hpp"

namespace kahlerlab::lab {

// Real-valued expression over x1..xn, y1..yn (z_k = x_k + i y_k) and r2 = |z|².
// Operators + − * / ^, unary minus, parentheses, constant pi and the functions
// sqrt exp log log1p sin cos tan sinh cosh tanh atan abs.
// Throws LabError(ConfigError) with the column of the offending token.
std::function<double(const CVec&)> compile_expression(const std::string& text, int n);

}  // namespace kahlerlab::lab
