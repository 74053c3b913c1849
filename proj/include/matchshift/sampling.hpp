#pragma once

#include <matchshift/core.hpp>
#include <matchshift/errors.hpp>
#include <matchshift/rng.hpp>

#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <vector>

namespace matchshift {

// --------------------------------------------------------------------------
// Minimal unsigned big integer: inversion-vector counts overflow 64 bits well
// before n = 50, and exact uniformity needs exact counts.

struct BigUint {
    std::vector<std::uint64_t> limbs; // little endian, no trailing zeros

    BigUint() = default;
    explicit BigUint(std::uint64_t v)
    {
        if (v)
            limbs.push_back(v);
    }

    bool is_zero() const { return limbs.empty(); }

    static int cmp(const BigUint & a, const BigUint & b)
    {
        if (a.limbs.size() != b.limbs.size())
            return a.limbs.size() < b.limbs.size() ? -1 : 1;
        for (std::size_t i = a.limbs.size(); i-- > 0;)
            if (a.limbs[i] != b.limbs[i])
                return a.limbs[i] < b.limbs[i] ? -1 : 1;
        return 0;
    }

    void add(const BigUint & o)
    {
        if (limbs.size() < o.limbs.size())
            limbs.resize(o.limbs.size(), 0);
        unsigned carry = 0;
        for (std::size_t i = 0; i < limbs.size(); ++i) {
            std::uint64_t rhs = i < o.limbs.size() ? o.limbs[i] : 0;
            if (rhs == 0 && carry == 0)
                continue;
            std::uint64_t before = limbs[i];
            limbs[i] += rhs + carry;
            carry = (limbs[i] < before || (carry && limbs[i] == before)) ? 1 : 0;
        }
        if (carry)
            limbs.push_back(1);
    }

    // requires o <= *this
    void sub(const BigUint & o)
    {
        std::uint64_t borrow = 0;
        for (std::size_t i = 0; i < limbs.size(); ++i) {
            const std::uint64_t rhs = i < o.limbs.size() ? o.limbs[i] : 0;
            const std::uint64_t before = limbs[i];
            const std::uint64_t take = rhs + borrow;
            borrow = (take < rhs) ? 1 : (before < take ? 1 : 0);
            limbs[i] = before - take;
        }
        trim();
    }

    void trim()
    {
        while (! limbs.empty() && limbs.back() == 0)
            limbs.pop_back();
    }

    int bit_length() const
    {
        if (limbs.empty())
            return 0;
        int bits = 64 * static_cast<int>(limbs.size() - 1);
        std::uint64_t top = limbs.back();
        while (top) {
            ++bits;
            top >>= 1;
        }
        return bits;
    }

    // uniform value in [0, n), n > 0
    static BigUint random_below(const BigUint & n, Rng & rng)
    {
        const int bits = n.bit_length();
        const std::size_t nlimbs = (bits + 63) / 64;
        const int top_bits = bits - 64 * static_cast<int>(nlimbs - 1);
        const std::uint64_t top_mask = top_bits >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << top_bits) - 1);
        BigUint r;
        while (true) {
            r.limbs.assign(nlimbs, 0);
            for (std::size_t i = 0; i < nlimbs; ++i)
                r.limbs[i] = rng.next_u64();
            r.limbs.back() &= top_mask;
            r.trim();
            if (cmp(r, n) < 0)
                return r;
        }
    }
};

// --------------------------------------------------------------------------
// Mallows model with normalised dispersion.

struct MallowsParams {
    double norm_phi = 0;
    double phi = 0;
    int n = 0;
};

// Exact expected inversion count of Mallows(phi) over n items, evaluated as
// the sum of per-insertion expected displacements (stable for phi near 1).
inline double expected_swap_distance(double phi, int n)
{
    if (phi <= 0)
        return 0;
    if (phi >= 1)
        return static_cast<double>(n) * (n - 1) / 4.0;
    double total = 0;
    for (int j = 2; j <= n; ++j) {
        double num = 0, den = 0, pw = 1;
        for (int t = 0; t < j; ++t) {
            num += t * pw;
            den += pw;
            pw *= phi;
        }
        total += num / den;
    }
    return total;
}

// Invert the defining property: expected swap distance equals
// norm_phi/2 times n(n-1)/2. Monotone in phi, solved by bisection to 1e-9.
inline MallowsParams mallows_from_norm_phi(double norm_phi, int n)
{
    if (norm_phi < 0 || norm_phi > 1)
        throw Error("norm-phi must lie in [0,1]");
    MallowsParams params;
    params.norm_phi = norm_phi;
    params.n = n;
    if (norm_phi == 0 || n < 2) {
        params.phi = 0;
        return params;
    }
    if (norm_phi == 1) {
        params.phi = 1;
        return params;
    }
    const double target = norm_phi / 2.0 * (static_cast<double>(n) * (n - 1) / 2.0);
    double lo = 0, hi = 1;
    while (hi - lo > 1e-9) {
        double mid = (lo + hi) / 2;
        if (expected_swap_distance(mid, n) < target)
            lo = mid;
        else
            hi = mid;
    }
    params.phi = (lo + hi) / 2;
    return params;
}

// Repeated-insertion sampling: the i-th item of the central order is placed
// j positions from the right with probability proportional to phi^j.
inline std::vector<int> sample_mallows(const std::vector<int> & central, const MallowsParams & params, Rng & rng)
{
    const int n = static_cast<int>(central.size());
    std::vector<int> out;
    out.reserve(n);
    const double phi = params.phi;
    for (int i = 0; i < n; ++i) {
        int d = 0;
        if (phi >= 1)
            d = rng.below_int(i + 1);
        else if (phi > 0) {
            double den = 0, pw = 1;
            for (int t = 0; t <= i; ++t) {
                den += pw;
                pw *= phi;
            }
            double u = rng.unit() * den;
            double acc = 0;
            pw = 1;
            for (int t = 0; t <= i; ++t) {
                acc += pw;
                if (u < acc || t == i) {
                    d = t;
                    break;
                }
                pw *= phi;
            }
        }
        out.insert(out.end() - d, central[i]);
    }
    return out;
}

inline std::vector<int> sample_mallows(const std::vector<int> & central, const MallowsParams & params, std::uint64_t seed)
{
    Rng rng(seed);
    return sample_mallows(central, params, rng);
}

// --------------------------------------------------------------------------
// Uniform sampling at an exact Kendall tau distance, via inversion vectors.
// ways[j][s] counts vectors (c_1..c_j), c_i in [0, i-1], summing to s.

namespace sampling_detail {

struct WaysTable {
    int n = 0;
    long long dmax = 0;
    std::vector<std::vector<BigUint>> ways; // ways[j][s], j in 0..n
};

inline std::shared_ptr<const WaysTable> ways_table(int n, long long dmax)
{
    static std::mutex mutex;
    static std::map<std::pair<int, long long>, std::shared_ptr<const WaysTable>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find({n, dmax});
    if (it != cache.end())
        return it->second;

    auto table = std::make_shared<WaysTable>();
    table->n = n;
    table->dmax = dmax;
    table->ways.assign(n + 1, std::vector<BigUint>(dmax + 1));
    table->ways[0][0] = BigUint(1);
    for (int j = 1; j <= n; ++j)
        for (long long s = 0; s <= dmax; ++s) {
            BigUint v;
            if (s > 0)
                v = table->ways[j][s - 1];
            v.add(table->ways[j - 1][s]);
            if (s - j >= 0)
                v.sub(table->ways[j - 1][s - j]);
            table->ways[j][s] = std::move(v);
        }
    cache[{n, dmax}] = table;
    return table;
}

} // namespace sampling_detail

// Uniform over all strict orders at swap distance exactly d from base.
inline std::vector<int> sample_at_swap_distance(const std::vector<int> & base, long long d, Rng & rng)
{
    const int n = static_cast<int>(base.size());
    const long long dmax = static_cast<long long>(n) * (n - 1) / 2;
    if (d < 0 || d > dmax)
        throw DistanceOutOfRange("swap distance " + std::to_string(d) + " outside [0, " + std::to_string(dmax) + "]");

    auto table = sampling_detail::ways_table(n, d);
    std::vector<int> disp(n + 1, 0);
    long long remaining = d;
    for (int j = n; j >= 2; --j) {
        const BigUint & total = table->ways[j][remaining];
        BigUint r = BigUint::random_below(total, rng);
        long long chosen = -1;
        for (long long c = 0; c <= std::min<long long>(j - 1, remaining); ++c) {
            const BigUint & t = table->ways[j - 1][remaining - c];
            if (BigUint::cmp(r, t) < 0) {
                chosen = c;
                break;
            }
            r.sub(t);
        }
        disp[j] = static_cast<int>(chosen);
        remaining -= chosen;
    }
    if (remaining != 0)
        throw Error("internal: inversion vector sampling went inconsistent");

    std::vector<int> out;
    out.reserve(n);
    for (int j = 1; j <= n; ++j)
        out.insert(out.end() - disp[j], base[j - 1]);
    return out;
}

inline std::vector<int> sample_at_swap_distance(const std::vector<int> & base, long long d, std::uint64_t seed)
{
    Rng rng(seed);
    return sample_at_swap_distance(base, d, rng);
}

// --------------------------------------------------------------------------
// Profile samplers. All consume a fixed number of draws per agent in a fixed
// order, so a profile is a pure function of its seed.

inline std::vector<int> random_order(int n, Rng & rng)
{
    std::vector<int> v(n);
    std::iota(v.begin(), v.end(), 0);
    rng.shuffle(v);
    return v;
}

inline PreferenceProfile sample_uniform_profile(int n_left, int n_right, std::uint64_t seed)
{
    if (n_left < 1 || n_right < 1)
        throw Error("profile sides must be nonempty");
    Rng rng(seed);
    PreferenceProfile p = PreferenceProfile::sm(n_left, n_right);
    for (int m = 0; m < n_left; ++m)
        p.left[m] = PreferenceList::strict_order(random_order(n_right, rng));
    for (int w = 0; w < n_right; ++w)
        p.right[w] = PreferenceList::strict_order(random_order(n_left, rng));
    return p;
}

// One random order per side, copied to every agent of the facing side.
inline PreferenceProfile sample_identical_profile(int n, std::uint64_t seed)
{
    if (n < 1)
        throw Error("profile sides must be nonempty");
    Rng rng(seed);
    PreferenceProfile p = PreferenceProfile::sm(n, n);
    auto left_list = PreferenceList::strict_order(random_order(n, rng));
    auto right_list = PreferenceList::strict_order(random_order(n, rng));
    for (int m = 0; m < n; ++m)
        p.left[m] = left_list;
    for (int w = 0; w < n; ++w)
        p.right[w] = right_list;
    return p;
}

// Every list drawn from Mallows around the identity central order.
inline PreferenceProfile sample_mallows_profile(int n_left, int n_right, double norm_phi, std::uint64_t seed)
{
    if (n_left < 1 || n_right < 1)
        throw Error("profile sides must be nonempty");
    Rng rng(seed);
    PreferenceProfile p = PreferenceProfile::sm(n_left, n_right);
    auto params_l = mallows_from_norm_phi(norm_phi, n_right);
    auto params_r = mallows_from_norm_phi(norm_phi, n_left);
    std::vector<int> central_l(n_right), central_r(n_left);
    std::iota(central_l.begin(), central_l.end(), 0);
    std::iota(central_r.begin(), central_r.end(), 0);
    for (int m = 0; m < n_left; ++m)
        p.left[m] = PreferenceList::strict_order(sample_mallows(central_l, params_l, rng));
    for (int w = 0; w < n_right; ++w)
        p.right[w] = PreferenceList::strict_order(sample_mallows(central_r, params_r, rng));
    return p;
}

} // namespace matchshift
