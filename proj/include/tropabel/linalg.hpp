#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "tropabel/rational.hpp"

namespace tropabel::linalg {

using Vector = std::vector<Rational>;
using Matrix = std::vector<Vector>;  // row major

Matrix zeros(std::size_t rows, std::size_t cols);
Matrix identity(std::size_t n);

Rational determinant(Matrix a);

// nullopt when singular.
std::optional<Matrix> inverse(Matrix a);

// Solves A x = b for A with full column rank. nullopt if the system is
// inconsistent. Throws std::invalid_argument on rank deficiency.
std::optional<Vector> solve(Matrix a, Vector b);

Vector multiply(const Matrix& a, const Vector& x);
Matrix multiply(const Matrix& a, const Matrix& b);

}  // namespace tropabel::linalg
