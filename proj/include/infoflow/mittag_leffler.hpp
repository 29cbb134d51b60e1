// mittag_leffler.hpp: one-parameter Mittag-Leffler function on the negative real axis
//
// E_a(-x) = sum_k (-x)^k / Gamma(1 + a k),   0 < a <= 1, x >= 0.
//
// Three evaluation routes are combined:
//   * Taylor series (compensated) for small x,
//   * the large-x asymptotic expansion sum_{k>=1} (-1)^{k+1} x^{-k} / Gamma(1 - a k),
//   * the real-line integral representation
//       E_a(-x) = sin(a pi)/(a pi) * int_0^inf exp(-(x u)^{1/a}) / (u^2 + 2 u cos(a pi) + 1) du,
//     which has a positive integrand and is used wherever the two series cannot
//     certify the requested tolerance.

#pragma once

#include <array>
#include <optional>
#include <string_view>
#include <vector>

namespace infoflow::ml {

inline constexpr double default_tolerance = 1e-10;
inline constexpr double default_taylor_limit = 5.0;      // x_c
inline constexpr double default_asymptotic_limit = 2.0;  // x_a

struct MLQuery {
    double alpha = 1.0;
    double x = 0.0; // evaluates E_alpha(-x)
    double target_tol = default_tolerance;

    void validate() const;
};

enum class Regime { exponential, taylor, integral, asymptotic };

std::string_view to_string(Regime regime) noexcept;

// A single route's result together with its own error estimate.
struct Partial {
    double value = 0.0;
    double error_estimate = 0.0;
};

struct Evaluation {
    double value = 0.0;
    Regime regime = Regime::integral;
};

// 1/Gamma(z), exactly zero at the poles z = 0, -1, -2, ...
double reciprocal_gamma(double z);

// Evaluator for a fixed order alpha. Series coefficients are precomputed once,
// so repeated evaluations (trajectory sampling, sweeps) stay cheap. Instances
// are immutable after construction and safe to share between threads.
class MittagLeffler {
public:
    explicit MittagLeffler(double alpha, double target_tol = default_tolerance,
                           double taylor_limit = default_taylor_limit,
                           double asymptotic_limit = default_asymptotic_limit);

    double alpha() const noexcept { return alpha_; }
    double tolerance() const noexcept { return tol_; }

    // E_alpha(-x), x >= 0.
    double operator()(double x) const { return evaluate(x).value; }
    Evaluation evaluate(double x) const;

    // Individual routes, exposed so the regimes can be cross-checked. Each
    // returns nullopt when it cannot certify its own estimate.
    std::optional<Partial> taylor(double x) const;
    std::optional<Partial> asymptotic(double x) const;
    Partial integral(double x) const;

private:
    static constexpr std::size_t max_terms = 200;

    double alpha_;
    double tol_;
    double taylor_limit_;
    double asymptotic_limit_;
    std::vector<double> taylor_coef_;     // 1/Gamma(1 + a k), k = 0..
    std::vector<double> asymptotic_coef_; // 1/Gamma(1 - a k), k = 1..
    std::vector<double> asymptotic_env_;  // Gamma(a k)/pi, bounds |asymptotic_coef_|
};

// E_alpha(-x) for a single query.
double ml_neg(const MLQuery& query);

// E_alpha(-(lambda t)^alpha), the relaxation envelope.
double ml_envelope(double alpha, double lambda, double t);

} // namespace infoflow::ml
