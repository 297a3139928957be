#include "nsbox/rational.hpp"

#include <cctype>

namespace nsbox {

Rat rat_from_string(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty number");
    auto dot = s.find('.');
    if (dot != std::string::npos) {
        // Exact decimal expansion: "x.yyy" -> (x*10^k + yyy) / 10^k
        std::string digits = s.substr(0, dot) + s.substr(dot + 1);
        size_t frac_len = s.size() - dot - 1;
        if (frac_len == 0) throw std::invalid_argument("malformed decimal: " + s);
        for (size_t i = 0; i < digits.size(); ++i) {
            char c = digits[i];
            if (i == 0 && (c == '-' || c == '+')) continue;
            if (!std::isdigit(static_cast<unsigned char>(c)))
                throw std::invalid_argument("malformed decimal: " + s);
        }
        Int num(digits, 10);
        Int den = 1;
        for (size_t i = 0; i < frac_len; ++i) den *= 10;
        Rat q(num, den);
        q.canonicalize();
        return q;
    }
    try {
        Rat q(s);
        q.canonicalize();
        if (q.get_den() < 0) throw std::invalid_argument("negative denominator");
        return q;
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("malformed rational: " + s);
    }
}

std::string rat_to_string(const Rat& q) {
    Rat c = q;
    c.canonicalize();
    if (c.get_den() == 1) return c.get_num().get_str();
    return c.get_str();
}

double rat_to_double(const Rat& q) { return q.get_d(); }

Rat rat_sum(const std::vector<Rat>& v) {
    Rat s = 0;
    for (const auto& x : v) s += x;
    return s;
}

}  // namespace nsbox
