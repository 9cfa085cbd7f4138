#include "useries/enumeration.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace useries {

std::uint64_t fusc(std::uint64_t n) {
    // Stern's diatomic sequence, iteratively: value = a at the end.
    std::uint64_t a = 1, b = 0;
    while (n > 0) {
        if (n & 1) b += a;
        else a += b;
        n >>= 1;
    }
    return b;
}

Rational calkin_wilf(std::uint64_t k) {
    if (k == 0) throw std::invalid_argument("calkin_wilf: k must be >= 1");
    return Rational(static_cast<std::int64_t>(fusc(k)), static_cast<std::int64_t>(fusc(k + 1)));
}

Rational rational_by_index(std::uint64_t c) {
    if (c == 0) return Rational(0, 1);
    const std::uint64_t k = (c + 1) / 2;
    Rational r = calkin_wilf(k);
    if (c % 2 == 0) r.num = -r.num;
    return r;
}

std::uint64_t index_of_rational(const Rational& r) {
    if (r.is_zero()) return 0;
    std::uint64_t p = static_cast<std::uint64_t>(r.num < 0 ? -r.num : r.num);
    std::uint64_t q = static_cast<std::uint64_t>(r.den);
    // Walk up the Calkin-Wilf tree recording the path, then replay it from
    // the root to recover the breadth-first index.
    std::vector<bool> path;
    while (!(p == 1 && q == 1)) {
        if (p < q) { path.push_back(false); q -= p; }
        else       { path.push_back(true);  p -= q; }
    }
    std::uint64_t k = 1;
    for (auto it = path.rbegin(); it != path.rend(); ++it) {
        if (k > (std::uint64_t{1} << 62)) throw std::overflow_error("index_of_rational: index overflow");
        k = 2 * k + (*it ? 1 : 0);
    }
    return r.num > 0 ? 2 * k - 1 : 2 * k;
}

std::pair<std::uint64_t, std::uint64_t> cantor_unpair(std::uint64_t z) {
    auto w = static_cast<std::uint64_t>((std::sqrt(8.0 * static_cast<double>(z) + 1.0) - 1.0) / 2.0);
    while (w * (w + 1) / 2 > z) --w;
    while ((w + 1) * (w + 2) / 2 <= z) ++w;
    const std::uint64_t t = w * (w + 1) / 2;
    const std::uint64_t b = z - t;
    return {w - b, b};
}

std::uint64_t cantor_pair(std::uint64_t a, std::uint64_t b) {
    const auto s = static_cast<unsigned __int128>(a) + b;
    const unsigned __int128 z = s * (s + 1) / 2 + b;
    if (z > static_cast<unsigned __int128>(UINT64_MAX))
        throw std::overflow_error("cantor_pair: index overflow");
    return static_cast<std::uint64_t>(z);
}

namespace {

void decode_tuple(std::uint64_t b, std::size_t count, std::vector<std::uint64_t>& out) {
    if (count == 1) { out.push_back(b); return; }
    const auto [x, y] = cantor_unpair(b);
    decode_tuple(x, count / 2, out);
    decode_tuple(y, count / 2, out);
}

std::uint64_t encode_tuple(const std::uint64_t* c, std::size_t count) {
    if (count == 1) return c[0];
    const std::uint64_t x = encode_tuple(c, count / 2);
    const std::uint64_t y = encode_tuple(c + count / 2, count / 2);
    return cantor_pair(x, y);
}

} // namespace

StepFunction enumerate_step(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("enumerate_step: index must be >= 1");
    const int level = std::countr_zero(n);
    const std::uint64_t b = (n >> level) / 2; // odd part = 2b+1
    if (level > 26) throw std::invalid_argument("enumerate_step: level beyond materializable range");
    std::vector<std::uint64_t> codes;
    codes.reserve(std::size_t{1} << level);
    decode_tuple(b, std::size_t{1} << level, codes);
    std::vector<Rational> values;
    values.reserve(codes.size());
    for (std::uint64_t c : codes) values.push_back(rational_by_index(c));
    return StepFunction(level, std::move(values));
}

std::uint64_t index_of_step(const StepFunction& f) {
    std::vector<std::uint64_t> codes;
    codes.reserve(f.cell_count());
    for (const auto& v : f.values()) codes.push_back(index_of_rational(v));
    const std::uint64_t b = encode_tuple(codes.data(), codes.size());
    if (b > (UINT64_MAX >> (f.level() + 1)))
        throw std::overflow_error("index_of_step: index overflow");
    return (std::uint64_t{2} * b + 1) << f.level();
}

} // namespace useries
