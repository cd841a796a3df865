#pragma once

// Brute-force reference computations. Nothing here shares code with the
// algorithms it is used to check.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "bar/osmd.hpp"

namespace bar::oracle {

/// <p, est> + (1/eta) B_F(p, q) for F(p) = -2 sum sqrt(p_i), evaluated directly.
double mirror_objective(std::span<const double> q, std::span<const double> est, double eta,
                        std::span<const double> p);

/// Minimizes mirror_objective over the simplex by nested grid refinement
/// (coarse 0.01 grid, then windows shrinking by 10x down to `resolution`).
/// Supports k = 2 and k = 3.
std::vector<double> grid_minimize_mirror(std::span<const double> q, std::span<const double> est,
                                         double eta, double resolution = 1e-8);

/// Minimizes F(p) = -2 sum sqrt(p_i) over a uniform simplex grid with the given
/// spacing, k = 3.
std::vector<double> grid_minimize_potential3(double spacing);

/// Wilson bound found by bisecting the score equation (phat - p)^2 = z^2 p (1-p) / n.
double wilson_bound_by_inversion(std::uint64_t successes, std::uint64_t trials, double z, bool upper);

/// Second, independently written implementation of the loss estimator.
std::vector<double> loss_estimate_reference(std::span<const double> q, std::size_t chosen,
                                            double loss, double eta, EstimatorVariant variant);

}  // namespace bar::oracle
