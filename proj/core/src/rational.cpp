#include <lll/rational.hpp>

#include <lll/errors.hpp>

#include <cctype>

namespace lll {

Rational parse_rational(std::string_view text) {
    if (text.empty()) throw ParseError("empty rational literal");
    std::string s(text);
    for (char c : s) {
        if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '/' || c == '-' || c == '+')) {
            throw ParseError("malformed rational literal: " + s);
        }
    }
    mpq_class q;
    if (q.set_str(s, 10) != 0) throw ParseError("malformed rational literal: " + s);
    if (q.get_den() == 0) throw ParseError("zero denominator in rational literal: " + s);
    q.canonicalize();
    return q;
}

std::string rational_str(const Rational& value) {
    return value.get_str();
}

Rational rational_pow(const Rational& value, unsigned long exp) {
    Rational out;
    mpz_pow_ui(out.get_num_mpz_t(), value.get_num_mpz_t(), exp);
    mpz_pow_ui(out.get_den_mpz_t(), value.get_den_mpz_t(), exp);
    out.canonicalize();
    return out;
}

}  // namespace lll
