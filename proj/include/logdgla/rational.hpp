#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace logdgla {

// Exact arithmetic scalar. GMP keeps values canonical (reduced, positive
// denominator), which the rest of the library relies on for term merging
// and matrix pivoting.
using Rational = mpq_class;

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct precondition_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct solver_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Parses "n" or "n/d". Rejects zero denominators and malformed input.
inline Rational parse_rational(const std::string& text) {
    if (text.empty())
        throw config_error("empty rational literal");
    size_t pos = 0;
    auto read_int = [&](mpz_class& out) {
        size_t start = pos;
        if (pos < text.size() && (text[pos] == '+' || text[pos] == '-'))
            ++pos;
        size_t digits_begin = pos;
        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9')
            ++pos;
        if (pos == digits_begin)
            throw config_error("bad rational literal: '" + text + "'");
        out = mpz_class(text.substr(start, pos - start));
    };
    mpz_class num, den(1);
    read_int(num);
    if (pos < text.size()) {
        if (text[pos] != '/')
            throw config_error("bad rational literal: '" + text + "'");
        ++pos;
        read_int(den);
        if (pos != text.size())
            throw config_error("bad rational literal: '" + text + "'");
        if (den == 0)
            throw config_error("zero denominator in rational: '" + text + "'");
    }
    Rational q(num, den);
    q.canonicalize();
    return q;
}

// Canonical string form: "0", "2", "-7/3". Inverse of parse_rational.
inline std::string rational_str(const Rational& q) {
    return q.get_str();
}

inline mpz_class rational_floor(const Rational& q) {
    mpz_class f;
    mpz_fdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return f;
}

}  // namespace logdgla
