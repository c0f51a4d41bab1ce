#include "rsdlab/rational.hpp"

#include "rsdlab/errors.hpp"

#include <cctype>
#include <cstdlib>

namespace rsdlab {

namespace {

bool all_digits(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

// Decimal (optionally scientific) literal -> exact rational.
Rat parse_decimal(const std::string& s) {
    std::string body = s;
    long exp10 = 0;
    auto epos = body.find_first_of("eE");
    if (epos != std::string::npos) {
        std::string es = body.substr(epos + 1);
        body = body.substr(0, epos);
        if (es.empty()) throw InputError("bad numeric literal: " + s);
        char* end = nullptr;
        exp10 = std::strtol(es.c_str(), &end, 10);
        if (end == nullptr || *end != '\0') throw InputError("bad exponent: " + s);
    }
    bool neg = false;
    if (!body.empty() && (body[0] == '+' || body[0] == '-')) {
        neg = body[0] == '-';
        body = body.substr(1);
    }
    std::string ipart = body, fpart;
    auto dot = body.find('.');
    if (dot != std::string::npos) {
        ipart = body.substr(0, dot);
        fpart = body.substr(dot + 1);
    }
    if (ipart.empty() && fpart.empty()) throw InputError("bad numeric literal: " + s);
    if (!ipart.empty() && !all_digits(ipart)) throw InputError("bad numeric literal: " + s);
    if (!fpart.empty() && !all_digits(fpart)) throw InputError("bad numeric literal: " + s);
    mpz_class num(ipart.empty() ? std::string("0") : ipart);
    for (char c : fpart) {
        num *= 10;
        num += c - '0';
    }
    mpz_class den(1);
    long shift = exp10 - static_cast<long>(fpart.size());
    mpz_class ten(10);
    if (shift >= 0) {
        mpz_class scale;
        mpz_pow_ui(scale.get_mpz_t(), ten.get_mpz_t(), static_cast<unsigned long>(shift));
        num *= scale;
    } else {
        mpz_pow_ui(den.get_mpz_t(), ten.get_mpz_t(), static_cast<unsigned long>(-shift));
    }
    Rat r(num, den);
    r.canonicalize();
    return neg ? Rat(-r) : r;
}

} // namespace

Rat parse_rat(const std::string& s) {
    if (s.empty()) throw InputError("empty rational literal");
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        std::string ns = s.substr(0, slash), ds = s.substr(slash + 1);
        if (ns.empty() || ds.empty()) throw InputError("bad rational literal: " + s);
        try {
            mpz_class nz(ns), dz(ds);
            if (dz == 0) throw InputError("zero denominator: " + s);
            Rat r(nz, dz);
            r.canonicalize();
            return r;
        } catch (const std::invalid_argument&) {
            throw InputError("bad rational literal: " + s);
        }
    }
    if (s.find('.') != std::string::npos || s.find('e') != std::string::npos ||
        s.find('E') != std::string::npos)
        return parse_decimal(s);
    try {
        return Rat(mpz_class(s));
    } catch (const std::invalid_argument&) {
        throw InputError("bad rational literal: " + s);
    }
}

Rat rat_frac(long num, long den) {
    if (den == 0) throw InputError("zero denominator");
    Rat r(num, den);
    r.canonicalize();
    return r;
}

std::string rat_str(const Rat& r) {
    if (r.get_den() == 1) return r.get_num().get_str();
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

double rat_double(const Rat& r) { return r.get_d(); }

Rat rat_pow(const Rat& r, unsigned long e) {
    Rat out;
    mpz_pow_ui(out.get_num_mpz_t(), r.get_num().get_mpz_t(), e);
    mpz_pow_ui(out.get_den_mpz_t(), r.get_den().get_mpz_t(), e);
    out.canonicalize();
    return out;
}

Rat rat_sum(const std::vector<Rat>& v) {
    Rat s(0);
    for (const auto& r : v) s += r;
    return s;
}

std::string vec_key(const std::vector<Rat>& v) {
    std::string key;
    for (const auto& r : v) {
        key += rat_str(r);
        key += ',';
    }
    return key;
}

} // namespace rsdlab
