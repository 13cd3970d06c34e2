#pragma once

#include <stdexcept>

namespace aloha_noma {

// Value checked to lie in [0, 1] at construction. Converts back to double
// implicitly so it can sit inside ordinary arithmetic.
class Probability {
  public:
    Probability() = default;

    explicit Probability(double v) : value_(v) {
        if (!(v >= 0.0 && v <= 1.0))
            throw std::invalid_argument("Probability: value outside [0, 1]");
    }

    double value() const { return value_; }
    operator double() const { return value_; }

  private:
    double value_ = 0.0;
};

// Gaussian tail probability Q(x) = P(Z > x) for standard normal Z.
// Throws on non-finite input.
Probability q_function(double x);

// Inverse of q_function: the x with Q(x) = p. Requires 0 < p < 1; the
// boundary values have no finite preimage and throw.
double q_inverse(Probability p);

// Inverse standard normal CDF on (0, 1). q_inverse(p) equals
// -standard_normal_quantile(p). Throws unless 0 < p < 1.
double standard_normal_quantile(double p);

} // namespace aloha_noma
