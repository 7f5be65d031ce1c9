#pragma once

#include <span>

#include "extinctlab/grid.hpp"

namespace extinctlab::kernels::detail {

double absorb_one(double u, double a, double q, double dt);
double outer_part(int N, double lo, double hi, double tau);
double gradient_at(const RadialGrid& g, std::span<const double> u, double tau);

}  // namespace extinctlab::kernels::detail
