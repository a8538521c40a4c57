#pragma once

#include <filesystem>
#include <string_view>

#include "frechet/operator.hpp"

namespace frechet::runner {

/// Parses an operator literal over `space`:
///
///   id | zero | shift(power[, coef]) | diag(d1, d2, ...) | dense(file.csv)
///   | sum(A, B, ...) | comp(outer, inner, ...) | scale(c, A)
///
/// `dense` reads a dim x dim comma-separated matrix relative to `base_dir`.
LinearOperator parse_operator(std::string_view text, const GradedSpace& space,
                              const std::filesystem::path& base_dir = ".");

DenseMatrix read_matrix_csv(const std::filesystem::path& path);

}  // namespace frechet::runner
