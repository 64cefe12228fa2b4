#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace rcp {

// Parametric interarrival laws for the renewal trains. Each variant carries
// closed forms for density, CDF, survivor, hazard and quantile.
//
// ShiftedPareto(alpha, scale):  F(t) = 1 - (scale/(scale+t))^alpha
//   hazard alpha/(scale+t), exactly decreasing; tail exponent alpha.
// Weibull(shape, scale):        hazard (shape/scale)(t/scale)^(shape-1),
//   decreasing iff shape <= 1 (unbounded at 0 for shape < 1).
// UniformLaw(b):                hazard 1/(b-t), increasing; F hits 1 at b.
class InterarrivalLaw {
public:
    enum class Kind { Exponential, ShiftedPareto, Weibull, UniformLaw };

    static InterarrivalLaw exponential(double rate) {
        require(rate > 0, "Exponential rate must be > 0");
        return {Kind::Exponential, rate, 0.0};
    }
    static InterarrivalLaw shifted_pareto(double alpha_tail, double scale) {
        require(alpha_tail > 0 && scale > 0, "ShiftedPareto needs alpha_tail > 0 and scale > 0");
        return {Kind::ShiftedPareto, alpha_tail, scale};
    }
    static InterarrivalLaw weibull(double shape, double scale) {
        require(shape > 0 && scale > 0, "Weibull needs shape > 0 and scale > 0");
        return {Kind::Weibull, shape, scale};
    }
    static InterarrivalLaw uniform(double b) {
        require(b > 0, "UniformLaw needs b > 0");
        return {Kind::UniformLaw, b, 0.0};
    }

    Kind kind() const { return kind_; }
    double param_a() const { return a_; }
    double param_b() const { return b_; }

    double density(double t) const {
        if (t < 0) return 0.0;
        switch (kind_) {
            case Kind::Exponential: return a_ * std::exp(-a_ * t);
            case Kind::ShiftedPareto:
                return a_ * std::pow(b_ / (b_ + t), a_) / (b_ + t);
            case Kind::Weibull: {
                if (t == 0.0) return a_ < 1 ? std::numeric_limits<double>::infinity()
                                            : (a_ == 1 ? 1.0 / b_ : 0.0);
                double z = t / b_;
                return (a_ / b_) * std::pow(z, a_ - 1) * std::exp(-std::pow(z, a_));
            }
            case Kind::UniformLaw: return t < a_ ? 1.0 / a_ : 0.0;
        }
        return 0.0;
    }

    double cdf(double t) const { return t <= 0 ? 0.0 : 1.0 - survivor(t); }

    double survivor(double t) const {
        if (t <= 0) return 1.0;
        switch (kind_) {
            case Kind::Exponential: return std::exp(-a_ * t);
            case Kind::ShiftedPareto: return std::pow(b_ / (b_ + t), a_);
            case Kind::Weibull: return std::exp(-std::pow(t / b_, a_));
            case Kind::UniformLaw: return t >= a_ ? 0.0 : 1.0 - t / a_;
        }
        return 0.0;
    }

    // h(t) = f(t)/(1-F(t)); throws where F(t) = 1 (UniformLaw, t >= b).
    double hazard(double t) const {
        if (t < 0) throw std::domain_error("hazard: t must be >= 0");
        switch (kind_) {
            case Kind::Exponential: return a_;
            case Kind::ShiftedPareto: return a_ / (b_ + t);
            case Kind::Weibull:
                if (t == 0.0) return a_ < 1 ? std::numeric_limits<double>::infinity()
                                            : (a_ == 1 ? 1.0 / b_ : 0.0);
                return (a_ / b_) * std::pow(t / b_, a_ - 1);
            case Kind::UniformLaw:
                if (t >= a_) throw std::domain_error("hazard: undefined at t, F(t) = 1");
                return 1.0 / (a_ - t);
        }
        return 0.0;
    }

    // inverse CDF; u in [0,1)
    double quantile(double u) const {
        if (u < 0 || u >= 1) throw std::domain_error("quantile: u must lie in [0,1)");
        switch (kind_) {
            case Kind::Exponential: return -std::log1p(-u) / a_;
            case Kind::ShiftedPareto: return b_ * (std::pow(1.0 - u, -1.0 / a_) - 1.0);
            case Kind::Weibull: return b_ * std::pow(-std::log1p(-u), 1.0 / a_);
            case Kind::UniformLaw: return u * a_;
        }
        return 0.0;
    }

    // exact per variant: hazard nonincreasing everywhere
    bool satisfies_hypothesis_A() const {
        switch (kind_) {
            case Kind::Exponential: return true;
            case Kind::ShiftedPareto: return true;
            case Kind::Weibull: return a_ <= 1.0;
            case Kind::UniformLaw: return false;
        }
        return false;
    }

    // exact per variant: integral of t^p dmu finite
    bool has_finite_moment(double p) const {
        switch (kind_) {
            case Kind::Exponential:
            case Kind::Weibull:
            case Kind::UniformLaw: return true;
            case Kind::ShiftedPareto: return p < a_;
        }
        return false;
    }

    double tail_exponent() const {
        return kind_ == Kind::ShiftedPareto ? a_ : std::numeric_limits<double>::infinity();
    }

    double mean() const {
        switch (kind_) {
            case Kind::Exponential: return 1.0 / a_;
            case Kind::ShiftedPareto:
                return a_ > 1 ? b_ / (a_ - 1) : std::numeric_limits<double>::infinity();
            case Kind::Weibull: return b_ * std::tgamma(1.0 + 1.0 / a_);
            case Kind::UniformLaw: return a_ / 2.0;
        }
        return 0.0;
    }

    std::string describe() const {
        switch (kind_) {
            case Kind::Exponential: return "exponential(rate=" + std::to_string(a_) + ")";
            case Kind::ShiftedPareto:
                return "shifted_pareto(alpha=" + std::to_string(a_) +
                       ", scale=" + std::to_string(b_) + ")";
            case Kind::Weibull:
                return "weibull(shape=" + std::to_string(a_) + ", scale=" + std::to_string(b_) + ")";
            case Kind::UniformLaw: return "uniform(b=" + std::to_string(a_) + ")";
        }
        return "?";
    }

    bool operator==(const InterarrivalLaw& o) const {
        return kind_ == o.kind_ && a_ == o.a_ && b_ == o.b_;
    }

private:
    InterarrivalLaw(Kind k, double a, double b) : kind_(k), a_(a), b_(b) {}
    static void require(bool ok, const char* msg) {
        if (!ok) throw std::invalid_argument(msg);
    }

    Kind kind_;
    double a_;  // rate / alpha_tail / shape / b
    double b_;  // - / scale / scale / -
};

}  // namespace rcp
