#include "useries/interval_set.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

namespace useries {

IntervalSet::IntervalSet(std::vector<Interval> pieces) {
    for (auto& p : pieces) {
        if (!(p.lo <= p.hi)) throw std::invalid_argument("Interval: lo > hi");
        p.lo = std::max(0.0, p.lo);
        p.hi = std::min(kTwoPi, p.hi);
    }
    std::erase_if(pieces, [](const Interval& p) { return p.hi <= p.lo; });
    std::sort(pieces.begin(), pieces.end(),
              [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    for (const auto& p : pieces) {
        if (!pieces_.empty() && p.lo <= pieces_.back().hi) {
            pieces_.back().hi = std::max(pieces_.back().hi, p.hi);
        } else {
            pieces_.push_back(p);
        }
    }
}

IntervalSet IntervalSet::full_circle() { return IntervalSet({{0.0, kTwoPi}}); }

double IntervalSet::measure() const {
    double m = 0.0;
    for (const auto& p : pieces_) m += p.length();
    return m;
}

bool IntervalSet::contains(double x) const {
    auto it = std::upper_bound(pieces_.begin(), pieces_.end(), x,
                               [](double v, const Interval& p) { return v < p.lo; });
    if (it == pieces_.begin()) return false;
    --it;
    return it->contains(x);
}

IntervalSet intersect(const IntervalSet& s, const IntervalSet& t) {
    std::vector<Interval> out;
    const auto& a = s.pieces();
    const auto& b = t.pieces();
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        const double lo = std::max(a[i].lo, b[j].lo);
        const double hi = std::min(a[i].hi, b[j].hi);
        if (lo < hi) out.push_back({lo, hi});
        if (a[i].hi < b[j].hi) ++i; else ++j;
    }
    return IntervalSet(std::move(out));
}

IntervalSet complement_within(const IntervalSet& s, const IntervalSet& u) {
    // Complement of s inside [0, 2*pi], then intersect with u.
    std::vector<Interval> comp;
    double cursor = 0.0;
    for (const auto& p : s.pieces()) {
        if (p.lo > cursor) comp.push_back({cursor, p.lo});
        cursor = std::max(cursor, p.hi);
    }
    if (cursor < kTwoPi) comp.push_back({cursor, kTwoPi});
    return intersect(IntervalSet(std::move(comp)), u);
}

IntervalSet set_union(const IntervalSet& s, const IntervalSet& t) {
    std::vector<Interval> all = s.pieces();
    all.insert(all.end(), t.pieces().begin(), t.pieces().end());
    return IntervalSet(std::move(all));
}

std::vector<IntervalSet> sample_subsets(const IntervalSet& E, int count,
                                        int max_pieces, std::uint64_t seed) {
    if (count < 1) throw std::invalid_argument("sample_subsets: count must be >= 1");
    if (max_pieces < 1) throw std::invalid_argument("sample_subsets: max_pieces must be >= 1");

    std::vector<IntervalSet> out;
    out.reserve(static_cast<std::size_t>(count));
    out.push_back(E);
    if (count >= 2) out.push_back(IntervalSet::empty());

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    while (out.size() < static_cast<std::size_t>(count)) {
        std::vector<Interval> slivers;
        if (!E.is_empty()) {
            std::uniform_int_distribution<std::size_t> pick(0, E.piece_count() - 1);
            std::uniform_int_distribution<int> npieces(1, max_pieces);
            const int k = npieces(rng);
            for (int i = 0; i < k; ++i) {
                const Interval& host = E.pieces()[pick(rng)];
                double a = host.lo + unit(rng) * host.length();
                double b = host.lo + unit(rng) * host.length();
                if (a > b) std::swap(a, b);
                slivers.push_back({a, b});
            }
        }
        IntervalSet e(std::move(slivers));
        // Guard against normalization merging past max_pieces; subset
        // property itself is guaranteed since slivers come from pieces of E.
        out.push_back(intersect(e, E));
    }
    return out;
}

} // namespace useries
