#include "tdt/rational.hpp"

#include <cctype>

namespace tdt {

namespace {

bool all_digits(std::string_view s)
{
    if (s.empty())
        return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c)))
            return false;
    return true;
}

} // namespace

std::optional<Rational> parse_rational(std::string_view text)
{
    bool negative = false;
    if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
        negative = text.front() == '-';
        text.remove_prefix(1);
    }
    Rational result;
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        auto num = text.substr(0, slash);
        auto den = text.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den))
            return std::nullopt;
        mpz_class d{std::string(den), 10};
        if (d == 0)
            return std::nullopt;
        result = Rational(mpz_class{std::string(num), 10}, d);
    } else {
        auto dot = text.find('.');
        auto whole = text.substr(0, dot);
        std::string_view frac;
        if (dot != std::string_view::npos)
            frac = text.substr(dot + 1);
        if (whole.empty() && frac.empty())
            return std::nullopt;
        if (!whole.empty() && !all_digits(whole))
            return std::nullopt;
        if (dot != std::string_view::npos && !all_digits(frac))
            return std::nullopt;
        mpz_class numerator{std::string(whole.empty() ? "0" : whole) + std::string(frac), 10};
        mpz_class denominator;
        mpz_ui_pow_ui(denominator.get_mpz_t(), 10, frac.size());
        result = Rational(numerator, denominator);
    }
    result.canonicalize();
    if (negative)
        result = -result;
    return result;
}

std::string to_fraction_string(const Rational& value)
{
    if (value.get_den() == 1)
        return value.get_num().get_str();
    return value.get_num().get_str() + "/" + value.get_den().get_str();
}

bool has_finite_decimal(const Rational& value)
{
    mpz_class den = value.get_den();
    while (mpz_divisible_ui_p(den.get_mpz_t(), 2))
        den /= 2;
    while (mpz_divisible_ui_p(den.get_mpz_t(), 5))
        den /= 5;
    return den == 1;
}

std::string to_display_string(const Rational& value)
{
    if (value.get_den() == 1)
        return value.get_num().get_str();
    if (!has_finite_decimal(value))
        return to_fraction_string(value);

    // Scale by 10^k until integral; k is the number of decimal places.
    std::size_t places = 0;
    Rational scaled = abs(value);
    while (scaled.get_den() != 1) {
        scaled *= 10;
        scaled.canonicalize();
        ++places;
    }
    std::string digits = scaled.get_num().get_str();
    if (digits.size() <= places)
        digits.insert(0, places - digits.size() + 1, '0');
    digits.insert(digits.size() - places, ".");
    if (sgn(value) < 0)
        digits.insert(0, "-");
    return digits;
}

double to_double(const Rational& value)
{
    return value.get_d();
}

} // namespace tdt
