#pragma once

// Straight-line serial reference implementations of the parallel kernels.
// Kept deliberately naive: unit tests compare the OpenMP kernels against
// these, and benchmarks/bench_kernels times both.

#include "jetcone/grid.hpp"
#include "jetcone/jet.hpp"

namespace jetcone::serial {

double excess(const std::vector<Jet>& A, const std::vector<Jet>& B);
double hausdorff(const std::vector<Jet>& A, const std::vector<Jet>& B);

// Global (unrestricted) lattice sup-convolution: no ball clipping.
GridFunction sup_convolution(const GridFunction& u, double eps);

}  // namespace jetcone::serial
