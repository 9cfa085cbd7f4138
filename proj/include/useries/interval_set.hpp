#pragma once

#include <cstdint>
#include <vector>

namespace useries {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// Closed-below, open-above subinterval of [0, 2*pi]. Endpoints carry no
// measure; membership everywhere in this project uses [lo, hi).
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double length() const { return hi - lo; }
    bool contains(double x) const { return x >= lo && x < hi; }
};

// Finite disjoint union of intervals, sorted by lo. This is the project's
// stand-in for a measurable subset of [0, 2*pi]: every set the construction
// produces (plateau level sets, their intersections, sampled subsets) is of
// this form, so set algebra and measure are exact.
class IntervalSet {
public:
    IntervalSet() = default;
    // Normalizes: clamps to [0, 2*pi], drops empty pieces, sorts, merges
    // overlaps and shared endpoints.
    explicit IntervalSet(std::vector<Interval> pieces);

    static IntervalSet full_circle();
    static IntervalSet empty() { return IntervalSet(); }

    const std::vector<Interval>& pieces() const { return pieces_; }
    std::size_t piece_count() const { return pieces_.size(); }
    bool is_empty() const { return pieces_.empty(); }

    // Exact total length; no quadrature involved.
    double measure() const;

    bool contains(double x) const;

private:
    std::vector<Interval> pieces_;
};

IntervalSet intersect(const IntervalSet& s, const IntervalSet& t);
// U \ S.
IntervalSet complement_within(const IntervalSet& s, const IntervalSet& u);
IntervalSet set_union(const IntervalSet& s, const IntervalSet& t);

// Seeded family of subsets of E used to spot-check "for every measurable
// subset e" conditions. The first two entries are always E itself and the
// empty set; the rest are random unions of at most max_pieces slivers of E.
std::vector<IntervalSet> sample_subsets(const IntervalSet& E, int count,
                                        int max_pieces, std::uint64_t seed);

} // namespace useries
