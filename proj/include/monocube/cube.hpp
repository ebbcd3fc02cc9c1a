#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace monocube {

/// Largest dimension with dense membership storage (2^25 bits = 4 MiB).
inline constexpr int kMaxDenseDim = 25;

/// Dense point index. Bit i of the index is coordinate i+1 of the point, so
/// the highest bit is coordinate n.
using Index = std::uint32_t;

/// A vertex of {0,1}^n. Wide enough for oracle workflows beyond the dense cap.
struct CubePoint {
    std::uint64_t index = 0;
    int n = 0;

    bool bit(int i) const noexcept { return ((index >> i) & 1u) != 0; }
    CubePoint flipped(int i) const noexcept { return {index ^ (std::uint64_t{1} << i), n}; }
    int weight() const noexcept;

    /// Binary string, highest bit (coordinate n) first.
    std::string to_string() const;
    static CubePoint parse(std::string_view bits);

    friend bool operator==(const CubePoint&, const CubePoint&) = default;
};

/// Coordinatewise order x <= y.
inline bool precedes(std::uint64_t x, std::uint64_t y) noexcept { return (x & ~y) == 0; }

/// Arbitrary subset of {0,1}^n as a dense bit array. No monotonicity implied.
class CubeSubset {
public:
    explicit CubeSubset(int n);

    int dim() const noexcept { return n_; }
    std::uint64_t num_points() const noexcept { return std::uint64_t{1} << n_; }

    bool contains(Index x) const noexcept { return ((words_[x >> 6] >> (x & 63)) & 1u) != 0; }
    void insert(Index x) noexcept { words_[x >> 6] |= std::uint64_t{1} << (x & 63); }
    void erase(Index x) noexcept { words_[x >> 6] &= ~(std::uint64_t{1} << (x & 63)); }

    std::size_t size() const noexcept;
    bool empty() const noexcept { return size() == 0; }

    std::span<const std::uint64_t> words() const noexcept { return words_; }
    std::span<std::uint64_t> words() noexcept { return words_; }

    friend bool operator==(const CubeSubset&, const CubeSubset&) = default;

private:
    int n_;
    std::vector<std::uint64_t> words_;
};

/// True iff every member x with x_i = 0 has x with bit i set also a member.
bool is_monotone(const CubeSubset& s);

/// A non-empty upward-closed subset of {0,1}^n, immutable after construction.
/// Members are kept in ascending index order; rank() maps a member to its
/// position in that order.
class MonotoneSet {
public:
    /// Validates non-emptiness, the dense cap and upward closure.
    static MonotoneSet from_subset(CubeSubset s);

    int dim() const noexcept { return bits_.dim(); }
    std::size_t size() const noexcept { return members_.size(); }
    double density() const noexcept;
    bool contains(Index x) const noexcept { return x < bits_.num_points() && bits_.contains(x); }
    std::optional<std::size_t> rank(Index x) const noexcept;
    std::span<const Index> members() const noexcept { return members_; }
    const CubeSubset& subset() const noexcept { return bits_; }
    Index all_ones() const noexcept { return static_cast<Index>(bits_.num_points() - 1); }
    bool is_full() const noexcept { return members_.size() == bits_.num_points(); }

    /// Members with no member strictly below them.
    std::vector<Index> minimal_elements() const;

    /// Number of members adjacent to x inside the set.
    int degree(Index x) const noexcept;

    friend bool operator==(const MonotoneSet& a, const MonotoneSet& b) { return a.bits_ == b.bits_; }

private:
    explicit MonotoneSet(CubeSubset bits);

    CubeSubset bits_;
    std::vector<Index> members_;
    std::vector<std::uint32_t> word_rank_;  // members strictly before each word
};

/// The two slices of A along coordinate n, as subsets of {0,1}^(n-1):
/// slice0 = {x' : (x',0) in A}, slice1 = {x' : (x',1) in A}.
struct SplitPair {
    std::optional<MonotoneSet> slice0;  // empty when no member has x_n = 0
    MonotoneSet slice1;
    std::size_t size0 = 0;
    std::size_t size1 = 0;
    double density0 = 0.0;
    double density1 = 0.0;
};

/// Upward closure of the generators.
MonotoneSet make_upset(int n, std::span<const Index> generators);
MonotoneSet make_upset(int n, std::initializer_list<Index> generators);

/// {x : |x| >= k}.
MonotoneSet threshold_set(int n, int k);

/// {x : x_coord = 1}, coord is a zero-based bit.
MonotoneSet dictator_set(int n, int coord);

/// Upward closure of m uniform random points of {0,1}^n.
MonotoneSet random_upset(int n, int m, std::uint64_t seed);

SplitPair split(const MonotoneSet& a);

/// Inverse of split: (slice0 x {0}) u (slice1 x {1}).
MonotoneSet join(const std::optional<MonotoneSet>& slice0, const MonotoneSet& slice1);

/// Largest n accepted by enumerate_monotone.
inline constexpr int kMaxEnumerateDim = 5;

/// Every non-empty monotone subset of {0,1}^n, each exactly once.
std::vector<MonotoneSet> enumerate_monotone(int n);
void for_each_monotone(int n, const std::function<void(const MonotoneSet&)>& visit);

/// Binomial coefficient, exact for n <= 62.
std::uint64_t binomial(int n, int k);

}  // namespace monocube
