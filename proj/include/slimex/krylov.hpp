#pragma once

#include <functional>
#include <string>
#include <vector>

namespace slimex {

using Vec = std::vector<double>;

struct LinearOperator {
    std::function<void(const Vec&, Vec&)> apply;  // y = A x
    int n = 0;
    bool symmetric = true;
};

struct SolveResult {
    Vec x;
    int iterations = 0;
    double residual = 0.0;   // ||A x - b||_2, recomputed at exit
    bool breakdown = false;  // CG met non-positive curvature
    std::string method;
};

// Matrix-free CG from a zero initial guess. Stops when ||r|| <= tol ||b||.
// On curvature breakdown returns with breakdown = true instead of throwing;
// throws NumericalError if max_iter is exhausted.
SolveResult cg_solve(const LinearOperator& A, const Vec& rhs, double tol = 1e-12, int max_iter = -1);
SolveResult bicgstab_solve(const LinearOperator& A, const Vec& rhs, double tol = 1e-12, int max_iter = -1);

// CG first, BiCGStab if CG breaks down, stalls or the true residual disagrees.
SolveResult solve_linear(const LinearOperator& A, const Vec& rhs, double tol = 1e-12, int max_iter = -1);

double norm2(const Vec& v);

}  // namespace slimex
