#include "infoflow/mittag_leffler.hpp"

#include "infoflow/errors.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/cos_pi.hpp>
#include <boost/math/special_functions/sin_pi.hpp>

#include <cmath>
#include <limits>
#include <sstream>

namespace infoflow::ml {

namespace {

using quiet_policy = boost::math::policies::policy<
    boost::math::policies::overflow_error<boost::math::policies::ignore_error>,
    boost::math::policies::underflow_error<boost::math::policies::ignore_error>,
    boost::math::policies::pole_error<boost::math::policies::ignore_error>>;

constexpr double eps = std::numeric_limits<double>::epsilon();
constexpr double pi = boost::math::constants::pi<double>();

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        std::ostringstream os;
        os << "Mittag-Leffler order alpha must lie in (0,1], got " << alpha;
        fail(ErrorKind::domain, os.str());
    }
}

void check_x(double x) {
    if (!(x >= 0.0) || std::isinf(x)) {
        std::ostringstream os;
        os << "Mittag-Leffler argument x must be finite and >= 0, got " << x;
        fail(ErrorKind::domain, os.str());
    }
}

// Neumaier's variant of Kahan summation.
struct CompensatedSum {
    double sum = 0.0;
    double carry = 0.0;

    void add(double v) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v))
            carry += (sum - t) + v;
        else
            carry += (v - t) + sum;
        sum = t;
    }
    double value() const { return sum + carry; }
};

} // namespace

std::string_view to_string(Regime regime) noexcept {
    switch (regime) {
    case Regime::exponential: return "exponential";
    case Regime::taylor: return "taylor";
    case Regime::integral: return "integral";
    case Regime::asymptotic: return "asymptotic";
    }
    return "unknown";
}

void MLQuery::validate() const {
    check_alpha(alpha);
    check_x(x);
    if (!(target_tol > 0.0)) {
        std::ostringstream os;
        os << "target tolerance must be positive, got " << target_tol;
        fail(ErrorKind::domain, os.str());
    }
}

double reciprocal_gamma(double z) {
    if (z <= 0.0 && z == std::floor(z))
        return 0.0;
    if (z >= 0.5)
        return 1.0 / boost::math::tgamma(z, quiet_policy());
    // Reflection: 1/Gamma(z) = Gamma(1 - z) sin(pi z) / pi.
    return boost::math::tgamma(1.0 - z, quiet_policy()) * boost::math::sin_pi(z) / pi;
}

MittagLeffler::MittagLeffler(double alpha, double target_tol, double taylor_limit,
                             double asymptotic_limit)
    : alpha_(alpha), tol_(target_tol), taylor_limit_(taylor_limit),
      asymptotic_limit_(asymptotic_limit) {
    check_alpha(alpha);
    if (!(target_tol > 0.0))
        fail(ErrorKind::domain, "target tolerance must be positive");
    taylor_coef_.reserve(max_terms);
    asymptotic_coef_.reserve(max_terms);
    for (std::size_t k = 0; k < max_terms; ++k)
        taylor_coef_.push_back(reciprocal_gamma(1.0 + alpha * static_cast<double>(k)));
    for (std::size_t k = 1; k <= max_terms; ++k) {
        const double ak = alpha * static_cast<double>(k);
        const double c = reciprocal_gamma(1.0 - ak);
        const double env = boost::math::tgamma(ak, quiet_policy()) / pi;
        if (!std::isfinite(c) || !std::isfinite(env))
            break;
        asymptotic_coef_.push_back(c);
        asymptotic_env_.push_back(env);
    }
}

std::optional<Partial> MittagLeffler::taylor(double x) const {
    check_x(x);
    CompensatedSum sum;
    double abs_sum = 0.0;
    double power = 1.0; // x^k
    double previous = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < taylor_coef_.size(); ++k) {
        const double magnitude = power * taylor_coef_[k];
        const double term = (k % 2 == 0) ? magnitude : -magnitude;
        sum.add(term);
        abs_sum += magnitude;
        const double s = sum.value();
        if (k > 0 && magnitude < previous && magnitude <= eps * 1e-2 * std::abs(s)) {
            return Partial{s, 4.0 * eps * abs_sum + magnitude};
        }
        previous = magnitude;
        power *= x;
        if (!std::isfinite(power))
            return std::nullopt;
    }
    return std::nullopt;
}

std::optional<Partial> MittagLeffler::asymptotic(double x) const {
    check_x(x);
    if (alpha_ == 1.0 || x <= 1.0)
        return std::nullopt;
    // Stopping uses the envelope |1/Gamma(1 - a k)| <= Gamma(a k)/pi, since
    // individual coefficients vanish whenever a k is an integer.
    CompensatedSum sum;
    const double inv_x = 1.0 / x;
    double power = inv_x; // x^{-k}
    double previous_env = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < asymptotic_coef_.size(); ++i) {
        const double env = asymptotic_env_[i] * power;
        if (!std::isfinite(env) || env > previous_env) {
            const double s = sum.value();
            if (!(s > 0.0) || !std::isfinite(previous_env))
                return std::nullopt;
            return Partial{s, previous_env};
        }
        const double term = asymptotic_coef_[i] * power;
        sum.add(i % 2 == 0 ? term : -term);
        previous_env = env;
        const double s = sum.value();
        if (s > 0.0 && env <= eps * 1e-2 * s)
            return Partial{s, env};
        power *= inv_x;
        if (power == 0.0)
            break;
    }
    const double s = sum.value();
    if (!(s > 0.0) || !std::isfinite(previous_env))
        return std::nullopt;
    return Partial{s, previous_env};
}

Partial MittagLeffler::integral(double x) const {
    check_x(x);
    // Double-exponential nodes absorb the u^{1/a} non-analyticity at u = 0.
    thread_local boost::math::quadrature::tanh_sinh<double> rule(15);
    const double a = alpha_;
    const double inv_a = 1.0 / a;
    // u^2 + 2 u cos(a pi) + 1 = (u + cos(a pi))^2 + sin(a pi)^2, written so the
    // near-cancellation around u = 1 for a -> 1 stays accurate.
    const double c = boost::math::cos_pi(a);
    const double s = boost::math::sin_pi(a);
    const double s2 = s * s;
    const double prefactor = s / (a * pi);
    const double quad_tol = std::min(1e-2 * tol_, 1e-12);

    // u in [0, 1]
    auto lower = [&](double u) {
        const double arg = x * u;
        const double num = arg > 0.0 ? std::exp(-std::pow(arg, inv_a)) : 1.0;
        const double shifted = u + c;
        return num / (shifted * shifted + s2);
    };
    // u = 1/w maps [1, inf) onto w in (0, 1].
    auto upper = [&](double w) {
        if (w <= 0.0)
            return 0.0;
        const double num = std::exp(-std::pow(x / w, inv_a));
        const double shifted = w + c;
        return num / (shifted * shifted + s2);
    };

    // Beyond (x u)^{1/a} = cut the exponential factor is below 1e-3 eps.
    const double cut = -std::log(1e-3 * eps);
    const double min_den = (c < 0.0) ? s2 : 1.0;
    double err_total = 0.0;
    auto piece = [&](auto& f, double lo, double hi) {
        if (!(hi > lo))
            return 0.0;
        double err = 0.0;
        double l1 = 0.0;
        const double v = rule.integrate(f, lo, hi, quad_tol, &err, &l1);
        err_total += err;
        return v;
    };

    // The factor exp(-(x u)^{1/a}) falls from 1 to negligible across
    // [1/x, cut^a/x]; splitting there keeps the nodes clustered on the drop.
    const double u_drop = x > 0.0 ? 1.0 / x : 2.0;
    const double u_cut = x > 0.0 ? std::pow(cut, a) / x : 2.0;
    double lower_part = piece(lower, 0.0, std::min(u_drop, 1.0));
    lower_part += piece(lower, std::min(u_drop, 1.0), std::min(u_cut, 1.0));
    if (u_cut < 1.0)
        err_total += std::exp(-cut) / min_den;

    // Upper piece in w = 1/u: negligible below w = x / cut^a, drop at w = x.
    double upper_part = 0.0;
    const double upper_bound = std::exp(-std::pow(x, inv_a)) / min_den;
    if (upper_bound > 1e-3 * eps * lower_part) {
        const double w_cut = x / std::pow(cut, a);
        upper_part = piece(upper, std::min(w_cut, 1.0), std::min(x, 1.0));
        upper_part += piece(upper, std::min(std::max(x, w_cut), 1.0), 1.0);
        if (w_cut > 0.0)
            err_total += std::exp(-cut) * std::min(w_cut, 1.0) / min_den;
    } else {
        err_total += upper_bound;
    }
    return Partial{prefactor * (lower_part + upper_part), prefactor * err_total};
}

Evaluation MittagLeffler::evaluate(double x) const {
    check_x(x);
    if (alpha_ == 1.0)
        return {std::exp(-x), Regime::exponential};
    if (x == 0.0)
        return {1.0, Regime::taylor};

    const double accept = 0.1 * tol_;
    if (x <= taylor_limit_) {
        if (auto t = taylor(x); t && t->value > 0.0 && t->error_estimate <= accept * t->value)
            return {std::min(t->value, 1.0), Regime::taylor};
    }
    if (x >= asymptotic_limit_) {
        if (auto s = asymptotic(x); s && s->error_estimate <= accept * s->value)
            return {s->value, Regime::asymptotic};
    }
    const Partial q = integral(x);
    if (!(q.value > 0.0) || q.error_estimate > tol_ * q.value) {
        std::ostringstream os;
        os.precision(17);
        os << "Mittag-Leffler evaluation did not reach tolerance " << tol_ << " at alpha=" << alpha_
           << ", x=" << x << " (estimate " << q.value << ", error " << q.error_estimate << ")";
        fail(ErrorKind::convergence, os.str());
    }
    return {std::min(q.value, 1.0), Regime::integral};
}

double ml_neg(const MLQuery& query) {
    query.validate();
    if (query.alpha == 1.0)
        return std::exp(-query.x);
    return MittagLeffler(query.alpha, query.target_tol)(query.x);
}

double ml_envelope(double alpha, double lambda, double t) {
    check_alpha(alpha);
    if (!(lambda > 0.0))
        fail(ErrorKind::domain, "envelope rate lambda must be positive");
    if (!(t >= 0.0))
        fail(ErrorKind::domain, "envelope time t must be >= 0");
    return ml_neg(MLQuery{alpha, std::pow(lambda * t, alpha), default_tolerance});
}

} // namespace infoflow::ml
