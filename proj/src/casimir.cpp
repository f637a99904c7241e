#include "hmfp/casimir.hpp"

#include "hmfp/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

namespace hmfp {

CasimirSpec CasimirSpec::entropy() { return CasimirSpec(CasimirFamily::entropy, 1.0); }

CasimirSpec CasimirSpec::power(double p) {
    if (!(p > 1.0) || !std::isfinite(p)) throw InvalidArgument("power casimir needs a finite exponent p > 1");
    return CasimirSpec(CasimirFamily::power, p);
}

CasimirSpec CasimirSpec::parse(std::string_view text) {
    auto trim = [](std::string_view s) {
        while (!s.empty() && (std::isspace(static_cast<unsigned char>(s.front())) || s.front() == '"')) s.remove_prefix(1);
        while (!s.empty() && (std::isspace(static_cast<unsigned char>(s.back())) || s.back() == '"')) s.remove_suffix(1);
        return s;
    };
    const std::string_view t = trim(text);
    if (t == "entropy") return entropy();
    if (t.starts_with("power:")) {
        const std::string num(t.substr(6));
        double p = 0.0;
        const auto res = std::from_chars(num.data(), num.data() + num.size(), p);
        if (res.ec != std::errc() || res.ptr != num.data() + num.size())
            throw InvalidArgument("bad power exponent '" + num + "'");
        return power(p);
    }
    throw InvalidArgument("unknown casimir '" + std::string(t) + "', expected entropy or power:<p>");
}

double CasimirSpec::j(double t) const {
    if (t <= 0.0) return 0.0;
    if (family_ == CasimirFamily::entropy) return t * std::log(t);
    return p_ == 2.0 ? t * t : std::pow(t, p_);
}

double CasimirSpec::j_prime(double t) const {
    if (family_ == CasimirFamily::entropy) return std::log(t) + 1.0;
    if (t <= 0.0) return 0.0;
    return p_ == 2.0 ? 2.0 * t : p_ * std::pow(t, p_ - 1.0);
}

double CasimirSpec::j_second(double t) const {
    if (family_ == CasimirFamily::entropy) return 1.0 / t;
    return p_ == 2.0 ? 2.0 : p_ * (p_ - 1.0) * std::pow(t, p_ - 2.0);
}

double CasimirSpec::inverse_derivative(double s) const {
    if (family_ == CasimirFamily::entropy) return std::exp(s - 1.0);
    if (s <= 0.0) return 0.0;
    return p_ == 2.0 ? s / 2.0 : std::pow(s / p_, 1.0 / (p_ - 1.0));
}

std::string CasimirSpec::name() const {
    if (family_ == CasimirFamily::entropy) return "entropy";
    std::ostringstream os;
    os.precision(17);
    os << "power:" << p_;
    return os.str();
}

double positive_part_inverse_derivative(const CasimirSpec& spec, double s) {
    if (spec.family() == CasimirFamily::entropy)
        throw InvalidArgument("entropy casimir has no positive-part inverse derivative");
    return spec.inverse_derivative(std::max(s, 0.0));
}

std::pair<double, double> check_h3_ratio(const CasimirSpec& spec, std::span<const double> samples) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (double t : samples) {
        if (!(t > 0.0)) throw InvalidArgument("h3 ratio samples must be positive");
        const double jt = spec.j(t);
        const double r = jt == 0.0 ? std::numeric_limits<double>::infinity() : t * spec.j_prime(t) / jt;
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    return {lo, hi};
}

} // namespace hmfp
