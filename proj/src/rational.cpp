#include "certlogic/rational.hpp"

#include <cctype>

namespace certlogic {

Rational parse_rational(const std::string& text) {
    size_t slash = text.find('/');
    auto check_int = [&](const std::string& s) {
        if (s.empty()) return false;
        size_t start = (s[0] == '-') ? 1 : 0;
        if (start == s.size()) return false;
        for (size_t i = start; i < s.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
        return true;
    };
    std::string num = text.substr(0, slash);
    std::string den = (slash == std::string::npos) ? "1" : text.substr(slash + 1);
    if (!check_int(num) || !check_int(den))
        throw ValidationError("malformed rational '" + text + "'");
    Integer d(den);
    if (d == 0) throw ValidationError("zero denominator in rational '" + text + "'");
    Rational q(Integer(num), d);
    q.canonicalize();
    return q;
}

std::string rational_to_string(const Rational& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

}  // namespace certlogic
