#include "weylwalk/weight.hpp"

#include <sstream>

namespace weylwalk {

namespace {

void check_same_dim(const Weight& a, const Weight& b) {
    if (a.dim() != b.dim())
        throw InvalidArgument("weight dimension mismatch: " + std::to_string(a.dim()) + " vs " +
                              std::to_string(b.dim()));
}

}  // namespace

Weight& Weight::operator+=(const Weight& o) {
    check_same_dim(*this, o);
    for (int i = 0; i < dim(); ++i) coords_[i] += o.coords_[i];
    return *this;
}

Weight& Weight::operator-=(const Weight& o) {
    check_same_dim(*this, o);
    for (int i = 0; i < dim(); ++i) coords_[i] -= o.coords_[i];
    return *this;
}

Weight Weight::operator-() const {
    std::vector<Rational> c(coords_);
    for (auto& q : c) q = -q;
    return Weight(std::move(c));
}

Weight operator*(const Rational& c, Weight w) {
    for (auto& q : w.coords_) q *= c;
    return w;
}

bool Weight::is_zero() const {
    for (const auto& q : coords_)
        if (q != 0) return false;
    return true;
}

bool Weight::is_integral() const {
    for (const auto& q : coords_)
        if (q.get_den() != 1) return false;
    return true;
}

std::string Weight::str() const {
    std::string out;
    for (int i = 0; i < dim(); ++i) {
        if (i) out += ',';
        out += rational_str(coords_[i]);
    }
    return out;
}

Weight Weight::parse(std::string_view text) {
    std::vector<Rational> coords;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t comma = text.find(',', pos);
        std::string_view tok =
            text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
        coords.push_back(parse_rational(tok));
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    if (coords.empty()) throw InvalidArgument("empty weight string");
    return Weight(std::move(coords));
}

size_t Weight::hash() const {
    // FNV-style combine over residues of numerators/denominators.
    const unsigned long p = 0xFFFFFFFBul;  // large 32-bit prime
    size_t h = 1469598103934665603ull;
    for (const auto& q : coords_) {
        unsigned long rn = mpz_fdiv_ui(q.get_num().get_mpz_t(), p);
        unsigned long rd = mpz_fdiv_ui(q.get_den().get_mpz_t(), p);
        h = (h ^ rn) * 1099511628211ull;
        h = (h ^ rd) * 1099511628211ull;
    }
    return h;
}

Rational dot(const Weight& a, const Weight& b) {
    check_same_dim(a, b);
    Rational s(0);
    for (int i = 0; i < a.dim(); ++i) s += a[i] * b[i];
    return s;
}

bool lex_greater(const Weight& a, const Weight& b) {
    int n = std::min(a.dim(), b.dim());
    for (int i = 0; i < n; ++i) {
        int c = cmp(a[i], b[i]);
        if (c != 0) return c > 0;
    }
    return a.dim() > b.dim();
}

std::string rational_str(const Rational& q) {
    Rational r = q;
    r.canonicalize();
    if (r.get_den() == 1) return r.get_num().get_str();
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

Rational parse_rational(std::string_view text) {
    // Trim surrounding whitespace.
    size_t b = text.find_first_not_of(" \t");
    size_t e = text.find_last_not_of(" \t");
    if (b == std::string_view::npos) throw InvalidArgument("empty rational");
    std::string s(text.substr(b, e - b + 1));
    mpq_t q;
    mpq_init(q);
    if (mpq_set_str(q, s.c_str(), 10) != 0) {
        mpq_clear(q);
        throw InvalidArgument("malformed rational: '" + s + "'");
    }
    if (mpz_sgn(mpq_denref(q)) == 0) {
        mpq_clear(q);
        throw InvalidArgument("zero denominator in rational: '" + s + "'");
    }
    mpq_canonicalize(q);
    Rational out(q);
    mpq_clear(q);
    return out;
}

}  // namespace weylwalk
