#include "monocube/cube.hpp"

#include <algorithm>
#include <bit>
#include <random>

#include "monocube/error.hpp"

namespace monocube {

namespace {

// Bits of a 64-bit word whose in-word offset has bit i clear (i < 6).
constexpr std::uint64_t kLowHalfMask[6] = {
    0x5555555555555555ULL, 0x3333333333333333ULL, 0x0F0F0F0F0F0F0F0FULL,
    0x00FF00FF00FF00FFULL, 0x0000FFFF0000FFFFULL, 0x00000000FFFFFFFFULL,
};

void check_dense_dim(int n) {
    if (n < 1 || n > kMaxDenseDim)
        throw Error("dimension " + std::to_string(n) + " outside supported range [1, " +
                    std::to_string(kMaxDenseDim) + "]");
}

std::size_t word_count(int n) { return n >= 6 ? (std::size_t{1} << (n - 6)) : 1; }

std::uint64_t valid_mask(int n) {
    return n >= 6 ? ~std::uint64_t{0} : ((std::uint64_t{1} << (1u << n)) - 1);
}

// In-place upward closure, one sweep per coordinate.
void close_upward(CubeSubset& s) {
    auto w = s.words();
    const int n = s.dim();
    for (int i = 0; i < n; ++i) {
        if (i < 6) {
            const unsigned shift = 1u << i;
            for (auto& word : w) word |= (word & kLowHalfMask[i]) << shift;
        } else {
            const std::size_t stride = std::size_t{1} << (i - 6);
            for (std::size_t j = 0; j < w.size(); ++j)
                if ((j & stride) == 0) w[j + stride] |= w[j];
        }
    }
    w.back() &= valid_mask(n);
}

}  // namespace

int CubePoint::weight() const noexcept { return std::popcount(index); }

std::string CubePoint::to_string() const {
    std::string s(static_cast<std::size_t>(n), '0');
    for (int i = 0; i < n; ++i)
        if (bit(i)) s[static_cast<std::size_t>(n - 1 - i)] = '1';
    return s;
}

CubePoint CubePoint::parse(std::string_view bits) {
    if (bits.empty() || bits.size() > 63) throw Error("bad point '" + std::string(bits) + "'");
    CubePoint p{0, static_cast<int>(bits.size())};
    for (char ch : bits) {
        if (ch != '0' && ch != '1') throw Error("bad point '" + std::string(bits) + "'");
        p.index = (p.index << 1) | static_cast<std::uint64_t>(ch == '1');
    }
    return p;
}

CubeSubset::CubeSubset(int n) : n_(n) {
    check_dense_dim(n);
    words_.assign(word_count(n), 0);
}

std::size_t CubeSubset::size() const noexcept {
    std::size_t total = 0;
    for (auto w : words_) total += static_cast<std::size_t>(std::popcount(w));
    return total;
}

bool is_monotone(const CubeSubset& s) {
    const auto w = s.words();
    for (int i = 0; i < s.dim(); ++i) {
        if (i < 6) {
            const unsigned shift = 1u << i;
            for (auto word : w)
                if ((((word & kLowHalfMask[i]) << shift) & ~word) != 0) return false;
        } else {
            const std::size_t stride = std::size_t{1} << (i - 6);
            for (std::size_t j = 0; j < w.size(); ++j)
                if ((j & stride) == 0 && (w[j] & ~w[j + stride]) != 0) return false;
        }
    }
    return true;
}

MonotoneSet::MonotoneSet(CubeSubset bits) : bits_(std::move(bits)) {
    const auto w = bits_.words();
    word_rank_.resize(w.size());
    members_.reserve(bits_.size());
    for (std::size_t j = 0; j < w.size(); ++j) {
        word_rank_[j] = static_cast<std::uint32_t>(members_.size());
        for (std::uint64_t word = w[j]; word != 0; word &= word - 1)
            members_.push_back(static_cast<Index>((j << 6) | static_cast<std::size_t>(std::countr_zero(word))));
    }
}

MonotoneSet MonotoneSet::from_subset(CubeSubset s) {
    if (s.empty()) throw Error("empty set not allowed");
    if (!is_monotone(s)) throw Error("set is not upward closed");
    return MonotoneSet(std::move(s));
}

double MonotoneSet::density() const noexcept {
    return static_cast<double>(members_.size()) / static_cast<double>(bits_.num_points());
}

std::optional<std::size_t> MonotoneSet::rank(Index x) const noexcept {
    if (!contains(x)) return std::nullopt;
    const std::uint64_t below = bits_.words()[x >> 6] & ((std::uint64_t{1} << (x & 63)) - 1);
    return word_rank_[x >> 6] + static_cast<std::size_t>(std::popcount(below));
}

std::vector<Index> MonotoneSet::minimal_elements() const {
    std::vector<Index> out;
    for (Index x : members_) {
        bool minimal = true;
        for (int i = 0; i < dim() && minimal; ++i)
            if (((x >> i) & 1u) && bits_.contains(x ^ (Index{1} << i))) minimal = false;
        if (minimal) out.push_back(x);
    }
    return out;
}

int MonotoneSet::degree(Index x) const noexcept {
    int d = 0;
    for (int i = 0; i < dim(); ++i) d += bits_.contains(x ^ (Index{1} << i)) ? 1 : 0;
    return d;
}

MonotoneSet make_upset(int n, std::span<const Index> generators) {
    check_dense_dim(n);
    if (generators.empty()) throw Error("empty set not allowed");
    CubeSubset s(n);
    for (Index g : generators) {
        if (g >= s.num_points()) throw Error("generator " + std::to_string(g) + " outside {0,1}^" + std::to_string(n));
        s.insert(g);
    }
    close_upward(s);
    return MonotoneSet::from_subset(std::move(s));
}

MonotoneSet make_upset(int n, std::initializer_list<Index> generators) {
    return make_upset(n, std::span<const Index>(generators.begin(), generators.size()));
}

MonotoneSet threshold_set(int n, int k) {
    check_dense_dim(n);
    if (k < 0 || k > n) throw Error("threshold k=" + std::to_string(k) + " outside [0, n]");
    CubeSubset s(n);
    for (std::uint64_t x = 0; x < s.num_points(); ++x)
        if (std::popcount(x) >= k) s.insert(static_cast<Index>(x));
    return MonotoneSet::from_subset(std::move(s));
}

MonotoneSet dictator_set(int n, int coord) {
    check_dense_dim(n);
    if (coord < 0 || coord >= n) throw Error("coordinate outside [0, n)");
    const Index g = Index{1} << coord;
    return make_upset(n, std::span<const Index>(&g, 1));
}

MonotoneSet random_upset(int n, int m, std::uint64_t seed) {
    check_dense_dim(n);
    if (m < 1) throw Error("random_upset needs at least one generator");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::uint64_t> pick(0, (std::uint64_t{1} << n) - 1);
    std::vector<Index> gens(static_cast<std::size_t>(m));
    for (auto& g : gens) g = static_cast<Index>(pick(rng));
    return make_upset(n, gens);
}

SplitPair split(const MonotoneSet& a) {
    const int n = a.dim();
    if (n < 2) throw Error("cannot split dimension 1");
    const Index half = Index{1} << (n - 1);
    CubeSubset lo(n - 1), hi(n - 1);
    for (Index x : a.members()) {
        if (x < half)
            lo.insert(x);
        else
            hi.insert(x - half);
    }
    const double cells = static_cast<double>(half);
    SplitPair out{std::nullopt, MonotoneSet::from_subset(std::move(hi)), 0, 0, 0.0, 0.0};
    out.size1 = out.slice1.size();
    out.density1 = static_cast<double>(out.size1) / cells;
    if (!lo.empty()) {
        out.slice0 = MonotoneSet::from_subset(std::move(lo));
        out.size0 = out.slice0->size();
        out.density0 = static_cast<double>(out.size0) / cells;
    }
    return out;
}

MonotoneSet join(const std::optional<MonotoneSet>& slice0, const MonotoneSet& slice1) {
    const int m = slice1.dim();
    if (slice0 && slice0->dim() != m) throw Error("slice dimensions differ");
    CubeSubset s(m + 1);
    const Index half = Index{1} << m;
    if (slice0)
        for (Index x : slice0->members()) s.insert(x);
    for (Index x : slice1.members()) s.insert(x + half);
    return MonotoneSet::from_subset(std::move(s));
}

void for_each_monotone(int n, const std::function<void(const MonotoneSet&)>& visit) {
    if (n < 1) throw Error("dimension must be positive");
    if (n > kMaxEnumerateDim) throw Error("enumeration cap: n <= " + std::to_string(kMaxEnumerateDim));
    // Monotone subsets of {0,1}^m (empty included) as masks over 2^m points.
    // A set on m coordinates is slice0 | slice1 << 2^(m-1) with slice0 within slice1.
    std::vector<std::uint64_t> level{0, 1};
    for (int m = 1; m <= n; ++m) {
        const unsigned half = 1u << (m - 1);
        std::vector<std::uint64_t> next;
        for (auto hi : level)
            for (auto lo : level)
                if ((lo & ~hi) == 0) next.push_back(lo | (hi << half));
        level = std::move(next);
    }
    std::sort(level.begin(), level.end());
    for (auto mask : level) {
        if (mask == 0) continue;
        CubeSubset s(n);
        s.words()[0] = mask;
        visit(MonotoneSet::from_subset(std::move(s)));
    }
}

std::vector<MonotoneSet> enumerate_monotone(int n) {
    std::vector<MonotoneSet> out;
    for_each_monotone(n, [&](const MonotoneSet& s) { out.push_back(s); });
    return out;
}

std::uint64_t binomial(int n, int k) {
    if (n < 0 || n > 62) throw Error("binomial supports 0 <= n <= 62");
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    unsigned __int128 r = 1;
    for (int j = 1; j <= k; ++j) r = r * static_cast<unsigned>(n - k + j) / static_cast<unsigned>(j);
    return static_cast<std::uint64_t>(r);
}

}  // namespace monocube
