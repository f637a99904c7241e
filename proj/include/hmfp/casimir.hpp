#pragma once

#include <span>
#include <string>
#include <string_view>
#include <utility>

namespace hmfp {

enum class CasimirFamily { entropy, power };

/// Convex generator j with j(0) = 0. Entropy is t ln t; Power(p) is t^p, p > 1.
class CasimirSpec {
  public:
    static CasimirSpec entropy();
    static CasimirSpec power(double p);
    /// Accepts "entropy" or "power:<p>", optionally quoted.
    static CasimirSpec parse(std::string_view text);

    CasimirFamily family() const noexcept { return family_; }
    /// Exponent p (= q) of a Power family; 1 for Entropy.
    double exponent() const noexcept { return p_; }

    double j(double t) const;
    double j_prime(double t) const;
    double j_second(double t) const;
    double inverse_derivative(double s) const;

    bool h1() const noexcept { return family_ == CasimirFamily::power; }
    bool h2() const noexcept { return true; }
    bool h3() const noexcept { return family_ == CasimirFamily::power; }

    std::string name() const;

  private:
    CasimirSpec(CasimirFamily f, double p) : family_(f), p_(p) {}
    CasimirFamily family_;
    double p_;
};

/// (j')^{-1}(max(s, 0)). Throws InvalidArgument for Entropy.
double positive_part_inverse_derivative(const CasimirSpec& spec, double s);

/// Extremes of t j'(t) / j(t) over the samples. Throws InvalidArgument on a
/// nonpositive sample. Entropy ratios are infinite where ln t = 0.
std::pair<double, double> check_h3_ratio(const CasimirSpec& spec, std::span<const double> samples);

} // namespace hmfp
