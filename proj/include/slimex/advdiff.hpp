#pragma once

#include <functional>
#include <string>
#include <vector>

#include "slimex/grid.hpp"
#include "slimex/slcore.hpp"
#include "slimex/tableaux.hpp"

namespace slimex {

enum class Algorithm { Alg0, Alg1, Alg2 };

struct AdvDiffProblem {
    Grid1D grid;
    ButcherPair tb;
    double alpha = 0.0;
    VelocitySampler velocity = VelocitySampler::constant(0.0);
    ScalarField q0;
    double t0 = 0.0;
    double t_final = 1.0;
    int n_steps = 1;
    Algorithm algorithm = Algorithm::Alg2;
    std::function<double(double, double)> exact;  // optional q(x, t)
};

struct DiffusionSolve {
    ScalarField q_I;
    ScalarField H_I;  // alpha * d2/dx2 q_I
    int iterations = 0;
};

// Solves (I - coeff d2/dx2) q_I = rhs; coeff = a_ii dt alpha.
DiffusionSolve diffusion_stage_solve(const ScalarField& rhs, double coeff, double alpha);

ScalarField step_algorithm0(const ScalarField& q, const AdvDiffProblem& p, double t, double dt);
ScalarField step_algorithm1(const ScalarField& q, const AdvDiffProblem& p, double t, double dt);
ScalarField step_algorithm2(const ScalarField& q, const AdvDiffProblem& p, double t, double dt);

struct StepRecord {
    int step;
    double time, l2, linf, mass;
};

struct AdvDiffResult {
    ScalarField q;
    std::vector<StepRecord> history;
    double l2 = 0.0, linf = 0.0;  // at t_final, when an exact solution exists
    std::vector<std::string> warnings;
};

AdvDiffResult run_advdiff(const AdvDiffProblem& p);

}  // namespace slimex
