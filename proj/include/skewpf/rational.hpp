#ifndef SKEWPF_RATIONAL_HPP
#define SKEWPF_RATIONAL_HPP

#include <gmpxx.h>

#include <random>
#include <stdexcept>
#include <string>

namespace skewpf {

// Exact arbitrary-precision rational. mpq_class keeps the canonical
// form (positive denominator, coprime) for us.
using Rat = mpq_class;

inline Rat rat_from_string(const std::string& s) {
    // Accept "p", "-p", "p/q". Reject anything mpq does not parse exactly
    // (in particular decimal notation).
    if (s.find('.') != std::string::npos)
        throw std::invalid_argument("exact rational required (use p/q), got: " + s);
    mpq_class q;
    if (q.set_str(s, 10) != 0)
        throw std::invalid_argument("cannot parse rational: " + s);
    if (q.get_den() == 0) throw std::invalid_argument("zero denominator: " + s);
    q.canonicalize();
    return q;
}

inline std::string rat_to_string(const Rat& q) {
    // mpq_class(p, q) does not reduce to lowest terms; always print the
    // canonical form.
    mpq_class c = q;
    c.canonicalize();
    return c.get_str();
}

// Deterministic stream of small integers used by all randomized searches.
class SmallIntStream {
public:
    explicit SmallIntStream(std::uint64_t seed, int lo = -10, int hi = 10)
        : eng_(seed), dist_(lo, hi) {}

    int next() { return dist_(eng_); }
    Rat next_rat() { return Rat(next()); }
    int next_nonzero() {
        int v = 0;
        while (v == 0) v = next();
        return v;
    }
    std::uint64_t next_u64() { return eng_(); }

private:
    std::mt19937_64 eng_;
    std::uniform_int_distribution<int> dist_;
};

}  // namespace skewpf

#endif
