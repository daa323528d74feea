#ifndef INSURVAL_LOSS_HPP
#define INSURVAL_LOSS_HPP

#include <string>

namespace insurval {

enum class LossKind { Quadratic, KoenkerBassett, Expectile };

// Hedging loss l and its subgradient. `level` is alpha for
// Koenker-Bassett, tau for expectile, ignored for quadratic.
// `smoothing` > 0 replaces the KB kink on |x| < eps by the quadratic
// matching value and slope at +-eps (training aid; final evaluation
// always uses smoothing = 0).
struct LossSpec {
    LossKind kind = LossKind::Quadratic;
    double level = 0.5;
    double smoothing = 0.0;

    static LossSpec quadratic();
    static LossSpec koenker_bassett(double alpha, double smoothing = 0.0);
    static LossSpec expectile(double tau);

    void validate() const;
    std::string name() const;
};

double loss_eval(const LossSpec& loss, double x);
double loss_subgradient(const LossSpec& loss, double x);

} // namespace insurval

#endif // INSURVAL_LOSS_HPP
