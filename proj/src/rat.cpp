#include "kstab/rat.hpp"

#include <cctype>

namespace kstab {

namespace {

bool parse_integer(const std::string& s, Int* out) {
    if (s.empty()) return false;
    std::size_t i = (s[0] == '-') ? 1 : 0;
    if (i == s.size()) return false;
    for (std::size_t j = i; j < s.size(); ++j)
        if (!std::isdigit(static_cast<unsigned char>(s[j]))) return false;
    *out = Int(s);
    return true;
}

}  // namespace

std::optional<Rat> rat_from_string(const std::string& text) {
    std::string num_part = text;
    std::string den_part;
    const std::size_t slash = text.find('/');
    if (slash != std::string::npos) {
        num_part = text.substr(0, slash);
        den_part = text.substr(slash + 1);
    }
    Int num;
    if (!parse_integer(num_part, &num)) return std::nullopt;
    Int den = 1;
    if (slash != std::string::npos) {
        if (!parse_integer(den_part, &den)) return std::nullopt;
        if (den <= 0) return std::nullopt;
        if (int_gcd(num < 0 ? Int(-num) : num, den) != 1) return std::nullopt;
    }
    return Rat(num, den);
}

}  // namespace kstab
