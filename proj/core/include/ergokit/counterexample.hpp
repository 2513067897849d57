#pragma once

#include <span>

#include "ergokit/space.hpp"
#include "ergokit/system.hpp"

namespace ergokit {

// Scale function F(t) = 1/(t log t) on (1, infinity) and its derivatives.
// F is a strictly decreasing bijection onto (0, infinity); F_inv is its
// inverse, computed by bracketed bisection polished with Newton steps to
// relative residual 1e-13.
double F_eval(double t);
double F_prime(double t);
double F_second(double t);
double F_inv(double y);

// Fiber vector-field component b2(y) = sgn(y) F'(F_inv(|y|)); b2(0) = 0.
double b2(double y);

// Its derivative b2'(y) = F''(F_inv(|y|)) / F'(F_inv(|y|)) for y != 0.
// Tends to 0 as y -> 0, which is the C^1 regularity of the field at the
// invariant fiber. Throws DomainError at y = 0 (the limit value is 0).
double b2_prime(double y);

// Fiber coordinate phi_y(t) = sgn(y) F(t + F_inv(|y|)) and reparametrized
// base time psi_y(t) = sgn(y) (loglog(t + c) - loglog(c)), c = F_inv(|y|).
// Both require y != 0.
double fiber_phi(double y, double t);
double base_psi(double y, double t);

// Parameters of the skew-product flow over a pluggable base system: the
// initial fiber coordinate y0, the base flow, the derived constant
// c = F_inv(|y0|) (0 when y0 = 0), a reference base point for profiles,
// and the sampled field bound M of the base.
struct CounterexampleParams {
    double y0 = 0.0;
    System base;
    double c = 0.0;
    Point base_x;
    double M = 1.0;
};

// Builds params; the base defaults to the linear torus flow with
// omega = (1, sqrt 2), the base point to the origin.
CounterexampleParams make_counterexample_params(double y0);
CounterexampleParams make_counterexample_params(double y0, System base, Point base_x);

// Product space of the skew product: base axes plus an unbounded fiber axis.
MetricSpaceSpec skew_product_space(const System& base);

// Closed-form skew-product flow started at (x, y0): returns the product
// point (f~^{psi(t)} x, phi(t)); for y0 = 0 the whole fiber is fixed and
// the result is (x, 0).
Point counterexample_flow(const CounterexampleParams& params, double t, const Point& x);

// Skew-product field b(x, y) = (y b~(x), b2(y)) at a product-space point;
// the zero vector on the invariant fiber y = 0.
void counterexample_field(const CounterexampleParams& params, const Point& p,
                          std::span<double> out);

// max ||b~|| over a uniform grid of about grid_n points on the base space,
// times a 1.05 safety factor. Requires a bounded base space and a field.
double field_bound(const System& base, int grid_n = 10000);

// Closed-form tail bound (1 + c/T)^q T^{q-1} - c/T with q = exp(-eps/M):
// an upper bound for the time fraction in [0, T] an orbit spends farther
// than eps (base distance) from its time-T base position.
double concentration_bound_closed_form(double c, double eps_over_M, double T);
double concentration_bound(const CounterexampleParams& params, double eps, double T);

}  // namespace ergokit
