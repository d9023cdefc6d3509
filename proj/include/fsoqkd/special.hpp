#pragma once

#include <span>

namespace fsoqkd::numerics {

/// Generalized Laguerre polynomial L_p^alpha(x) by three-term recurrence.
double laguerre(int p, int alpha, double x);

/// Physicists' Hermite polynomial H_n(x) by three-term recurrence.
double hermite(int n, double x);

/// Orthonormal Hermite function psi_n(u) = H_n(u) exp(-u^2/2) / sqrt(2^n n! sqrt(pi)),
/// evaluated by the normalized recurrence (no overflow for large n).
double hermite_function(int n, double u);

/// Fills out[0..out.size()) with psi_0(u) .. psi_{size-1}(u).
void hermite_functions(double u, std::span<double> out);

/// sin(x)/x with the removable singularity filled in.
double sinc(double x);

/// log(n!) via lgamma.
double log_factorial(int n);

} // namespace fsoqkd::numerics
