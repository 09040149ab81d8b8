#pragma once

#include <optional>
#include <vector>

#include "critmult/rational.hpp"

namespace critmult {

struct RowEchelon {
  Matrix rows;  // reduced row echelon form, zero rows dropped
  std::vector<std::size_t> pivots;
};

RowEchelon rref(Matrix a, std::size_t cols);
std::size_t rank(const Matrix& a, std::size_t cols);

// Basis of {u : A u = 0}; each vector primitive with first nonzero entry positive.
std::vector<Vec> linear_kernel(const Matrix& a, std::size_t cols);

// Some solution of A x = b, or nullopt when inconsistent.
std::optional<Vec> solve_linear(const Matrix& a, const Vec& b, std::size_t cols);

// Indices of a maximal linearly independent subset of rows, greedy in order.
std::vector<std::size_t> independent_rows(const Matrix& a, std::size_t cols);

// Orthogonal projection of z onto the affine set {x : M x = c}; nullopt when the set is empty.
std::optional<Vec> project_affine(const Matrix& m, const Vec& c, const Vec& z);

// Component of v orthogonal to span(basis).
Vec orthogonal_residual(const Vec& v, const std::vector<Vec>& basis);

}  // namespace critmult
