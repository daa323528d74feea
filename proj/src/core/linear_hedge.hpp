#ifndef INSURVAL_LINEAR_HEDGE_HPP
#define INSURVAL_LINEAR_HEDGE_HPP

#include "panel.hpp"
#include "sample.hpp"

namespace insurval {

// One-period hedging: minimize the empirical expected loss of
// S - beta.Y over strategies beta for each loss family.

// Quadratic hedge via the normal equations on empirical moments; the
// residual has mean zero.
HedgeStrategy ols_hedge(const Sample& liability, const AssetPanel& panel);

// Koenker-Bassett hedge at level alpha; the residual has empirical
// VaR_alpha zero up to interpolation.
HedgeStrategy quantile_hedge(const Sample& liability, const AssetPanel& panel, double alpha);

// Asymmetric-least-squares hedge at level tau; the residual has
// expectile statistic zero.
HedgeStrategy expectile_hedge(const Sample& liability, const AssetPanel& panel, double tau);

// Hedge the residual S - base.Y under the given loss.
HedgeStrategy residual_hedge(const Sample& liability, const AssetPanel& panel,
                             const HedgeStrategy& base, const LossSpec& loss);

// residual sample S - strategy.Y
Sample hedge_residuals(const Sample& liability, const AssetPanel& panel,
                       const HedgeStrategy& strategy);

} // namespace insurval

#endif // INSURVAL_LINEAR_HEDGE_HPP
