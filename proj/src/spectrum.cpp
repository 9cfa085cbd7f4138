#include "useries/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "useries/fft.hpp"

namespace useries {

HermitianSpectrum::HermitianSpectrum(std::vector<Entry> entries) : entries_(std::move(entries)) {
    std::sort(entries_.begin(), entries_.end(),
              [](const Entry& a, const Entry& b) { return a.k < b.k; });
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (entries_[i].k < 0) throw std::invalid_argument("HermitianSpectrum: negative frequency stored");
        if (i > 0 && entries_[i].k == entries_[i - 1].k)
            throw std::invalid_argument("HermitianSpectrum: duplicate frequency");
    }
    if (!entries_.empty() && entries_.front().k == 0 &&
        std::abs(entries_.front().c.imag()) > 1e-12 * (1.0 + std::abs(entries_.front().c.real())))
        throw std::invalid_argument("HermitianSpectrum: C_0 must be real");
    std::erase_if(entries_, [](const Entry& e) { return e.c == std::complex<double>(0.0, 0.0); });
}

std::complex<double> HermitianSpectrum::at(long k) const {
    const long kk = k < 0 ? -k : k;
    auto it = std::lower_bound(entries_.begin(), entries_.end(), kk,
                               [](const Entry& e, long v) { return e.k < v; });
    if (it == entries_.end() || it->k != kk) return {0.0, 0.0};
    return k < 0 ? std::conj(it->c) : it->c;
}

double HermitianSpectrum::sum_abs() const {
    double acc = 0.0;
    for (const auto& e : entries_) acc += (e.k == 0 ? 1.0 : 2.0) * std::abs(e.c);
    return acc;
}

double HermitianSpectrum::sum_square() const {
    double acc = 0.0;
    for (const auto& e : entries_) acc += (e.k == 0 ? 1.0 : 2.0) * std::norm(e.c);
    return acc;
}

double HermitianSpectrum::max_abs() const {
    double m = 0.0;
    for (const auto& e : entries_) m = std::max(m, std::abs(e.c));
    return m;
}

double Modulus::operator()(double t) const {
    if (t <= 0.0) return 0.0;
    switch (kind) {
        case Kind::Power:
            return scale * std::pow(t, alpha);
        case Kind::LogReciprocal:
            return scale / std::log(std::exp(1.0) + 1.0 / t);
        case Kind::Table: {
            if (table.empty()) return 0.0;
            if (t <= table.front().first)
                return scale * table.front().second * (t / table.front().first);
            if (t >= table.back().first) return scale * table.back().second;
            auto it = std::lower_bound(table.begin(), table.end(), t,
                                       [](const auto& kn, double v) { return kn.first < v; });
            const auto& [t1, w1] = *it;
            const auto& [t0, w0] = *(it - 1);
            const double u = (t - t0) / (t1 - t0);
            return scale * (w0 + u * (w1 - w0));
        }
    }
    return 0.0;
}

Modulus Modulus::from_table(std::vector<std::pair<double, double>> knots, double scale) {
    std::sort(knots.begin(), knots.end());
    for (std::size_t i = 0; i < knots.size(); ++i) {
        if (knots[i].first <= 0.0 || knots[i].second < 0.0)
            throw std::invalid_argument("Modulus table: knots must have t > 0, w >= 0");
        if (i > 0 && knots[i].second < knots[i - 1].second)
            throw std::invalid_argument("Modulus table: weights must be nondecreasing");
    }
    return Modulus{Kind::Table, 1.0, scale, std::move(knots)};
}

double Modulus::inverse_below(double target, double hi) const {
    if (target <= 0.0) return 0.0;
    if ((*this)(hi) <= target) return hi;
    double lo = 0.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if ((*this)(mid) <= target) lo = mid;
        else hi = mid;
    }
    return lo;
}

HermitianSpectrum fourier_coefficients(const std::vector<double>& values, const Grid& g,
                                       long max_freq) {
    if (values.size() != g.size())
        throw std::invalid_argument("fourier_coefficients: sample count does not match grid");
    if (max_freq >= g.max_frequency())
        throw std::invalid_argument("fourier_coefficients: max_freq violates the aliasing limit");
    std::vector<std::complex<double>> buf(values.begin(), values.end());
    fft_forward(buf);
    const double inv_n = 1.0 / static_cast<double>(g.size());
    std::vector<HermitianSpectrum::Entry> entries;
    entries.reserve(static_cast<std::size_t>(max_freq) + 1);
    for (long k = 0; k <= max_freq; ++k)
        entries.push_back({k, buf[static_cast<std::size_t>(k)] * inv_n});
    // Real input makes this Hermitian up to rounding; force C_0 real.
    if (!entries.empty()) entries[0].c = {entries[0].c.real(), 0.0};
    return HermitianSpectrum(std::move(entries));
}

std::complex<double> fourier_coefficient_direct(const std::vector<double>& values, const Grid& g,
                                                long k) {
    std::complex<double> acc(0.0, 0.0);
    for (std::size_t j = 0; j < values.size(); ++j) {
        const double ang = -static_cast<double>(k) * g.x(j);
        acc += values[j] * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    return acc / static_cast<double>(g.size());
}

namespace {

std::vector<double> realize(std::vector<std::complex<double>>& buf, double coeff_mass) {
    fft_inverse(buf);
    double max_imag = 0.0;
    std::vector<double> out(buf.size());
    for (std::size_t j = 0; j < buf.size(); ++j) {
        max_imag = std::max(max_imag, std::abs(buf[j].imag()));
        out[j] = buf[j].real();
    }
    if (coeff_mass > 0.0 && max_imag > 1e-9 * coeff_mass)
        throw std::logic_error("eval_partial_sum: imaginary residue above tolerance");
    return out;
}

} // namespace

std::vector<double> eval_partial_sum(const std::vector<CoeffBlock>& blocks, long m, const Grid& g) {
    const std::size_t n = g.size();
    std::vector<std::complex<double>> buf(n, {0.0, 0.0});
    double mass = 0.0;
    for (const auto& b : blocks) {
        for (const auto& e : b.spectrum.entries()) {
            if (m >= 0 && e.k > m) break;
            if (e.k >= g.max_frequency())
                throw std::invalid_argument("eval_partial_sum: frequency beyond grid");
            buf[static_cast<std::size_t>(e.k)] += e.c;
            if (e.k > 0) buf[n - static_cast<std::size_t>(e.k)] += std::conj(e.c);
            mass += (e.k == 0 ? 1.0 : 2.0) * std::abs(e.c);
        }
    }
    return realize(buf, mass);
}

std::vector<double> eval_spectrum(const HermitianSpectrum& spec, const Grid& g) {
    std::vector<CoeffBlock> one{{0, 0, g.max_frequency(), spec}};
    return eval_partial_sum(one, -1, g);
}

double max_imag_residue_ratio(const std::vector<CoeffBlock>& blocks, long m, const Grid& g) {
    const std::size_t n = g.size();
    std::vector<std::complex<double>> buf(n, {0.0, 0.0});
    double mass = 0.0;
    for (const auto& b : blocks)
        for (const auto& e : b.spectrum.entries()) {
            if (m >= 0 && e.k > m) break;
            buf[static_cast<std::size_t>(e.k)] += e.c;
            if (e.k > 0) buf[n - static_cast<std::size_t>(e.k)] += std::conj(e.c);
            mass += (e.k == 0 ? 1.0 : 2.0) * std::abs(e.c);
        }
    if (mass == 0.0) return 0.0;
    fft_inverse(buf);
    double max_imag = 0.0;
    for (const auto& c : buf) max_imag = std::max(max_imag, std::abs(c.imag()));
    return max_imag / mass;
}

double coefficient_budget(const std::vector<CoeffBlock>& blocks, const Modulus& omega) {
    double acc = 0.0;
    for (const auto& b : blocks)
        for (const auto& e : b.spectrum.entries()) {
            const double a = std::abs(e.c);
            acc += (e.k == 0 ? 1.0 : 2.0) * a * a * omega(a);
        }
    return acc;
}

double coefficient_budget_first_power(const std::vector<CoeffBlock>& blocks, const Modulus& omega) {
    double acc = 0.0;
    for (const auto& b : blocks)
        for (const auto& e : b.spectrum.entries()) {
            const double a = std::abs(e.c);
            acc += (e.k == 0 ? 1.0 : 2.0) * a * omega(a);
        }
    return acc;
}

double parseval_defect(const std::vector<double>& values, const HermitianSpectrum& spec,
                       const Grid& g) {
    double energy = 0.0;
    for (double v : values) energy += v * v;
    energy *= g.cell() / kTwoPi;
    return std::abs(spec.sum_square() - energy);
}

} // namespace useries
