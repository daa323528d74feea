#ifndef INSURVAL_RISK_MEASURES_HPP
#define INSURVAL_RISK_MEASURES_HPP

#include "sample.hpp"

namespace insurval {

// Value-at-Risk: generalized inverse of the empirical cdf,
// inf{x : P(X <= x) >= alpha}. On a uniform M-point sample this is the
// ceil(alpha*M)-th order statistic.
double var(const Sample& sample, double alpha);

// Tail Value-at-Risk as the exact tail integral of the empirical
// quantile function, (1/(1-alpha)) * int_alpha^1 VaR_u du. The order
// statistic straddling alpha enters with fractional weight, so the
// defining integral holds exactly on empirical data.
double tvar(const Sample& sample, double alpha);

// TVaR deviation: tvar minus mean.
double dtvar(const Sample& sample, double alpha);

// tau-expectile: the root c of tau*E[(X-c)+] = (1-tau)*E[(c-X)+],
// located by bisection to 1e-10 * scale.
double expectile(const Sample& sample, double tau);

// Mean normalised Koenker-Bassett error, l_a(x) = a/(1-a)*x+ + x-.
double kb_error(const Sample& sample, double alpha);

} // namespace insurval

#endif // INSURVAL_RISK_MEASURES_HPP
