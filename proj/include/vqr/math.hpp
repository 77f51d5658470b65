#pragma once

#include <Eigen/Dense>

namespace vqr {

/// Standard normal cumulative distribution function.
double std_normal_cdf(double x);

/// Standard normal density.
double std_normal_pdf(double x);

/// Standard normal quantile function.  Rational initial approximation
/// refined by one Halley step against the erfc-based CDF; absolute error
/// below 1e-12 across (0,1).  Throws ValidationError for p outside (0,1).
double std_normal_quantile(double p);

/// Weighted mean of v with weights w (w >= 0, sum w > 0).
double weighted_mean(const Eigen::VectorXd& v, const Eigen::VectorXd& w);

/// Weighted standard deviation (population form, centered at the weighted
/// mean).  Returns 0 for constant vectors.
double weighted_std(const Eigen::VectorXd& v, const Eigen::VectorXd& w);

/// Kolmogorov-Smirnov distance between the empirical distribution of the
/// sample and the uniform law on (0,1).
double kolmogorov_uniform_distance(const Eigen::VectorXd& sample);

/// Linear-interpolation sample quantile (the common "type 7" convention)
/// at level q in [0,1].
double sample_quantile(const Eigen::VectorXd& v, double q);

}  // namespace vqr
